//! Nielsen idempotents of u(g_m) = GF(p)[c]/(c^p - c).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{Elem, Field};

/// An element of GF(p)[c]/(c^p - c), coefficients of 1, c, ..., c^{p-1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NielsenElement {
    pub p: u32,
    pub eta: Elem,
    pub coeffs: Vec<Elem>,
}

/// Ni_eta(c) = -sum_{n=1}^{p-1} c^n / eta^n for eta != 0, and 1 - c^{p-1} for eta = 0.
pub fn nielsen(eta: Elem, p: u32) -> Result<NielsenElement> {
    let f = Field::prime(p)?;
    let eta = eta % p;
    let mut coeffs = vec![0; p as usize];
    if eta == 0 {
        coeffs[0] = 1;
        coeffs[p as usize - 1] = f.neg(1);
    } else {
        let inv = f.inv(eta).unwrap();
        for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c = f.neg(f.pow(inv, n as u64));
        }
    }
    Ok(NielsenElement { p, eta, coeffs })
}

/// Product in GF(p)[c]/(c^p - c): c^p folds back to c.
pub fn mul_mod_cp(p: u32, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let f = Field::prime(p).expect("p validated by caller");
    let p = p as usize;
    let mut out = vec![0; p];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let mut d = i + j;
            if d >= p {
                d -= p - 1;
            }
            out[d] = f.add(out[d], f.mul(x, y));
        }
    }
    out
}

impl NielsenElement {
    /// rho_t: evaluation at c = t.
    pub fn evaluate(&self, t: Elem) -> Elem {
        let f = Field::prime(self.p).unwrap();
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, t), c))
    }

    pub fn mul(&self, other: &NielsenElement) -> Vec<Elem> {
        mul_mod_cp(self.p, &self.coeffs, &other.coeffs)
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == self.coeffs
    }
}

/// All p Nielsen idempotents, eta = 0..p-1.
pub fn nielsen_system(p: u32) -> Result<Vec<NielsenElement>> {
    (0..p).map(|eta| nielsen(eta, p)).collect()
}
