//! Integer-order Bessel functions of the first kind.
//!
//! Values are produced by Miller's backward recurrence
//! `J_{k-1}(x) = (2k/x) J_k(x) - J_{k+1}(x)`, started well above both the
//! requested order and the turning point `k ≈ x`, and normalized with the
//! Neumann identity `J_0 + 2 Σ J_{2k} = 1`.

/// Starting order for the backward recurrence.
fn start_order(x: f64, nmax: usize) -> usize {
    let top = (nmax as f64).max(x);
    let m = top + 40.0 + 12.0 * top.sqrt();
    let m = m.ceil() as usize;
    m + (m & 1)
}

/// `J_0(x), …, J_{nmax}(x)` for `x ≥ 0`.
fn sequence_nonneg(x: f64, nmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let m = start_order(x, nmax);
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k, arbitrary seed
    let mut norm = 0.0;
    for k in (1..=m).rev() {
        let prev = (2.0 * k as f64 / x) * cur - next;
        next = cur;
        cur = prev;
        // cur now holds J_{k-1}
        let order = k - 1;
        if order <= nmax {
            out[order] = cur;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
    }
    norm += cur;
    out.iter_mut().for_each(|v| *v /= norm);
    out
}

/// `J_0(x), …, J_{nmax}(x)` for any real `x`.
pub fn bessel_j_sequence(x: f64, nmax: usize) -> Vec<f64> {
    let mut out = sequence_nonneg(x.abs(), nmax);
    if x < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `J_n(x)` for any integer order.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let order = n.unsigned_abs() as usize;
    let v = bessel_j_sequence(x, order)[order];
    if n < 0 && order % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Table of `J_k(x)` for `|k| ≤ kmax`, indexed by signed order.
#[derive(Debug, Clone)]
pub struct BesselTable {
    x: f64,
    values: Vec<f64>,
}

impl BesselTable {
    pub fn new(x: f64, kmax: usize) -> Self {
        BesselTable {
            x,
            values: bessel_j_sequence(x, kmax),
        }
    }

    /// Table covering every order whose magnitude exceeds roughly `1e-17`.
    pub fn covering(x: f64) -> Self {
        let kmax = x.abs().ceil() as usize + 30 + (4.0 * x.abs().cbrt()) as usize * 4;
        Self::new(x, kmax)
    }

    pub fn argument(&self) -> f64 {
        self.x
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    /// `J_k(x)`, zero beyond the tabulated range.
    pub fn get(&self, k: i64) -> f64 {
        let order = k.unsigned_abs() as usize;
        if order >= self.values.len() {
            return 0.0;
        }
        let v = self.values[order];
        if k < 0 && order % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

/// `i^k` for integer `k`.
pub fn i_pow(k: i64) -> num_complex::Complex64 {
    use num_complex::Complex64;
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}
