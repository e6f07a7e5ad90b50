//! Multiprecision evaluation of the R₁ Pfaffians for the uniform ring.
//!
//! In double precision the Pfaffians bottom out near 1e−32: entries are
//! accurate only to 1e−16 in absolute terms, and deep in the paramagnet at
//! low temperature R₁ is far smaller than that. Here the two-point
//! functions come from the Bloch modes of the antiperiodic ring,
//! `k = π(2n+1)/L`, and everything is carried in MPFR floats.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::fermion::model::MajoranaModel;
use crate::linalg::C64;

/// Complex number over MPFR floats. Only what the Pfaffian needs.
#[derive(Debug, Clone)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn zero(prec: u32) -> Self {
        Self {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    fn real(prec: u32, v: f64) -> Self {
        Self {
            re: Float::with_val(prec, v),
            im: Float::new(prec),
        }
    }

    fn neg(&self) -> Self {
        Self {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    fn mul(&self, o: &Cx) -> Cx {
        let prec = self.re.prec();
        let mut re = Float::with_val(prec, &self.re * &o.re);
        re -= Float::with_val(prec, &self.im * &o.im);
        let mut im = Float::with_val(prec, &self.re * &o.im);
        im += Float::with_val(prec, &self.im * &o.re);
        Cx { re, im }
    }

    fn div(&self, o: &Cx) -> Cx {
        let prec = self.re.prec();
        let den = Float::with_val(prec, o.re.square_ref()) + Float::with_val(prec, o.im.square_ref());
        let conj = Cx {
            re: o.re.clone(),
            im: Float::with_val(prec, -&o.im),
        };
        let mut q = self.mul(&conj);
        q.re /= &den;
        q.im /= &den;
        q
    }

    /// `self += s·(a·b)` for `s = ±1`, with `tmp` as scratch.
    fn add_product(&mut self, a: &Cx, b: &Cx, negate: bool, tmp: &mut Float) {
        let (rr, ii, ri, ir) = (
            (&a.re, &b.re),
            (&a.im, &b.im),
            (&a.re, &b.im),
            (&a.im, &b.re),
        );
        let mut acc = |dst: &mut Float, (x, y): (&Float, &Float), minus: bool| {
            tmp.assign(x * y);
            if minus != negate {
                *dst -= &*tmp;
            } else {
                *dst += &*tmp;
            }
        };
        acc(&mut self.re, rr, false);
        acc(&mut self.re, ii, true);
        acc(&mut self.im, ri, false);
        acc(&mut self.im, ir, false);
    }

    fn l1(&self) -> Float {
        Float::with_val(self.re.prec(), self.re.abs_ref()) + Float::with_val(self.re.prec(), self.im.abs_ref())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Antisymmetric matrix stored through its strict upper triangle.
struct Upper {
    n: usize,
    a: Vec<Cx>,
}

impl Upper {
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    fn get(&self, i: usize, j: usize) -> Cx {
        if i < j {
            self.a[self.idx(i, j)].clone()
        } else {
            self.a[self.idx(j, i)].neg()
        }
    }

    fn set(&mut self, i: usize, j: usize, v: Cx) {
        if i < j {
            let k = self.idx(i, j);
            self.a[k] = v;
        } else {
            let k = self.idx(j, i);
            self.a[k] = v.neg();
        }
    }

    /// Exchanges indices `p < q` among the rows and columns `≥ from`.
    fn swap(&mut self, p: usize, q: usize, from: usize) {
        for m in from..self.n {
            if m == p || m == q {
                continue;
            }
            let (x, y) = (self.get(m, p), self.get(m, q));
            self.set(m, p, y);
            self.set(m, q, x);
        }
        let v = self.get(p, q).neg();
        self.set(p, q, v);
    }
}

/// Parlett–Reid with partial pivoting, as in the double-precision kernel.
fn pfaffian(mut m: Upper, prec: u32) -> Cx {
    let n = m.n;
    let mut pf = Cx::real(prec, 1.0);
    let mut tmp = Float::new(prec);
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = m.a[m.idx(k, k + 1)].l1();
        for i in k + 2..n {
            let v = m.a[m.idx(k, i)].l1();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            m.swap(k + 1, kp, k);
            pf = pf.neg();
        }
        let pivot = m.a[m.idx(k, k + 1)].clone();
        if pivot.is_zero() {
            return Cx::zero(prec);
        }
        pf = pf.mul(&pivot);
        // a_ij += τ_i c_j − c_i τ_j with τ_i = a_ki / pivot, c_i = a_{i,k+1}.
        let tau: Vec<Cx> = (k + 2..n).map(|i| m.a[m.idx(k, i)].div(&pivot)).collect();
        let col: Vec<Cx> = (k + 2..n).map(|i| m.a[m.idx(k + 1, i)].neg()).collect();
        for ii in 0..tau.len() {
            for jj in ii + 1..tau.len() {
                let at = m.idx(k + 2 + ii, k + 2 + jj);
                let e = &mut m.a[at];
                e.add_product(&tau[ii], &col[jj], false, &mut tmp);
                e.add_product(&col[ii], &tau[jj], true, &mut tmp);
            }
        }
        k += 2;
    }
    pf
}

/// `⟨γ_{2j+a}(τ + Δτ) γ_{2j'+b}(τ)⟩` for the uniform antiperiodic ring,
/// tabulated by `d = j − j' mod L`.
struct BlochKernel {
    l: usize,
    blocks: Vec<[[Cx; 2]; 2]>,
}

impl BlochKernel {
    fn new(model: &MajoranaModel, beta: f64, dtau: f64, prec: u32) -> Result<Self> {
        let l = model.n_sites();
        let f = |v: f64| Float::with_val(prec, v);
        let (j, g) = (f(model.coupling()), f(model.field()));
        let (beta, dtau) = (f(beta), f(dtau));
        let pi = Float::with_val(prec, Constant::Pi);
        // phase[m] = e^{iπm/L}
        let phase: Vec<(Float, Float)> = (0..2 * l)
            .map(|m| {
                let t = Float::with_val(prec, &pi * m as u32) / l as u32;
                let (s, c) = t.sin_cos(Float::new(prec));
                (c, s)
            })
            .collect();
        let mut blocks: Vec<[[Cx; 2]; 2]> = (0..l)
            .map(|_| std::array::from_fn(|_| std::array::from_fn(|_| Cx::zero(prec))))
            .collect();
        let mut tmp = Float::new(prec);
        for n in 0..l {
            let odd = 2 * n + 1;
            let (ck, sk) = &phase[odd % (2 * l)];
            // m(k) = 2iJ(e^{−ik} − g), ε = |m|
            let mre = Float::with_val(prec, &j * sk) * 2u32;
            let mim = Float::with_val(prec, ck - &g) * &j * 2u32;
            let eps = Float::with_val(prec, mre.square_ref()) + Float::with_val(prec, mim.square_ref());
            let eps = eps.sqrt();
            if eps.is_zero() {
                return Err(Error::InvalidParameter("gapless Bloch mode".into()));
            }
            // f(±ε) = 2 e^{∓Δτε, (Δτ−β)ε} / (1 + e^{−βε})
            let den = Float::with_val(prec, -(Float::with_val(prec, &beta * &eps))).exp() + 1u32;
            let fp = Float::with_val(prec, -(Float::with_val(prec, &dtau * &eps))).exp() * 2u32 / &den;
            let fm = Float::with_val(prec, Float::with_val(prec, &dtau - &beta) * &eps).exp() * 2u32
                / &den;
            let fe = Float::with_val(prec, &fp + &fm) / 2u32;
            let fo = Float::with_val(prec, &fp - &fm) / 2u32 / &eps;
            // M(k) = [[0, m], [m*, 0]]; block(k) = fe·1 + fo·M(k)
            let diag = Cx {
                re: fe,
                im: Float::new(prec),
            };
            let m01 = Cx {
                re: Float::with_val(prec, &fo * &mre),
                im: Float::with_val(prec, &fo * &mim),
            };
            let m10 = Cx {
                re: m01.re.clone(),
                im: Float::with_val(prec, -&m01.im),
            };
            let block = [[&diag, &m01], [&m10, &diag]];
            for (d, out) in blocks.iter_mut().enumerate() {
                let (c, s) = &phase[(odd * d) % (2 * l)];
                let e = Cx {
                    re: c.clone(),
                    im: s.clone(),
                };
                for a in 0..2 {
                    for b in 0..2 {
                        out[a][b].add_product(&e, block[a][b], false, &mut tmp);
                    }
                }
            }
        }
        for out in &mut blocks {
            for row in out.iter_mut() {
                for v in row.iter_mut() {
                    v.re /= l as u32;
                    v.im /= l as u32;
                }
            }
        }
        Ok(Self { l, blocks })
    }

    fn get(&self, i: usize, k: usize) -> Cx {
        let (ji, a) = (i / 2, i % 2);
        let (jk, b) = (k / 2, k % 2);
        if ji >= jk {
            self.blocks[ji - jk][a][b].clone()
        } else {
            // e^{ikL} = −1 on antiperiodic momenta.
            self.blocks[ji + self.l - jk][a][b].neg()
        }
    }
}

fn wick(model: &MajoranaModel, beta: f64, ops: &[(usize, f64)], prec: u32) -> Result<Cx> {
    let mut kernels: Vec<(f64, BlochKernel)> = Vec::new();
    let n = ops.len();
    let mut m = Upper {
        n,
        a: vec![Cx::zero(prec); n * n],
    };
    for p in 0..n {
        for q in p + 1..n {
            let ((i, ta), (j, tb)) = (ops[p], ops[q]);
            let v = if (i, ta) == (j, tb) {
                Cx::real(prec, 1.0)
            } else {
                let dtau = ta - tb;
                if !kernels.iter().any(|(d, _)| *d == dtau) {
                    kernels.push((dtau, BlochKernel::new(model, beta, dtau, prec)?));
                }
                kernels.iter().find(|(d, _)| *d == dtau).unwrap().1.get(i, j)
            };
            let at = m.idx(p, q);
            m.a[at] = v;
        }
    }
    Ok(pfaffian(m, prec))
}

/// Numerator of the projected R₁, `(−1)^r Pf(plain) + i^L Pf(twisted)`,
/// with the same operator lists as the double-precision path. Precision is
/// doubled until the result clears the rounding floor by twelve digits.
pub(crate) fn projected_numerator(
    model: &MajoranaModel,
    beta: f64,
    plain: &[(usize, f64)],
    twisted: &[(usize, f64)],
    sign: f64,
) -> Result<(C64, u32)> {
    let l = model.n_sites() as u32;
    let mut prec = 256;
    loop {
        let a = wick(model, beta, plain, prec)?;
        let b = wick(model, beta, twisted, prec)?;
        let mut b = match l % 4 {
            0 => b,
            1 => Cx {
                re: Float::with_val(prec, -&b.im),
                im: b.re,
            },
            2 => b.neg(),
            _ => Cx {
                re: b.im,
                im: Float::with_val(prec, -&b.re),
            },
        };
        if sign < 0.0 {
            b.re -= &a.re;
            b.im -= &a.im;
        } else {
            b.re += &a.re;
            b.im += &a.im;
        }
        // Rounding floor of the Pfaffians, about (2^{−p})² times the
        // dimension.
        let floor = Float::with_val(prec, 2u32).pow(-2 * prec as i32) * (2 * plain.len().max(twisted.len())) as u32;
        let ok = b.l1() > Float::with_val(prec, &floor * 1e12);
        if ok || prec >= 4096 {
            if !ok {
                return Err(Error::Normalization(format!(
                    "R1 numerator below the {prec}-bit rounding floor"
                )));
            }
            return Ok((b.to_c64(), prec));
        }
        prec *= 2;
    }
}
