use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest embedding dimension this crate will materialize.
const MAX_DIM: usize = 1 << 26;

/// Ordering of monomials in the embedding. Recorded in manifests so a
/// weight vector can be matched to its coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialOrder {
    /// By total degree, then lexicographically with `x₁` most significant:
    /// `1, x₁, x₂, x₁², x₁x₂, x₂², …`.
    GradedLexV1,
}

/// `C(n + deg, n)`, the number of monomials of degree at most `deg` in `n`
/// variables, or `None` on overflow.
pub fn monomial_count(n: usize, deg: usize) -> Option<usize> {
    let mut acc: u128 = 1;
    for i in 1..=deg as u128 {
        acc = acc.checked_mul(n as u128 + i)? / i;
    }
    usize::try_from(acc).ok()
}

/// The map `φ(x) = ((x^a)_{|a| ≤ deg}, 0)` into `ℝ^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EmbeddingRepr", into = "EmbeddingRepr")]
pub struct EmbeddingSpec {
    pub n: usize,
    pub deg: usize,
    /// Output length `M ≥ C(n + deg, n)`; coordinates past the monomials are zero.
    pub dim: usize,
    pub order: MonomialOrder,
    exponents: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct EmbeddingRepr {
    n: usize,
    deg: usize,
    dim: usize,
    order: MonomialOrder,
}

impl TryFrom<EmbeddingRepr> for EmbeddingSpec {
    type Error = Error;
    fn try_from(r: EmbeddingRepr) -> Result<Self> {
        EmbeddingSpec::new(r.n, r.deg, Some(r.dim))
    }
}

impl From<EmbeddingSpec> for EmbeddingRepr {
    fn from(e: EmbeddingSpec) -> Self {
        EmbeddingRepr { n: e.n, deg: e.deg, dim: e.dim, order: e.order }
    }
}

impl EmbeddingSpec {
    /// `dim = None` uses exactly `C(n + deg, n)` coordinates.
    pub fn new(n: usize, deg: usize, dim: Option<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("embedding needs at least one variable".into()));
        }
        let count = monomial_count(n, deg)
            .filter(|&c| c <= MAX_DIM)
            .ok_or_else(|| Error::Domain(format!("C({} + {deg}, {n}) monomials is too many to materialize", n)))?;
        let dim = dim.unwrap_or(count);
        if dim < count {
            return Err(Error::Domain(format!("dimension {dim} is below the {count} monomials of degree ≤ {deg}")));
        }
        if dim > MAX_DIM {
            return Err(Error::Domain(format!("dimension {dim} exceeds the limit {MAX_DIM}")));
        }
        let mut exponents = Vec::with_capacity(count);
        let mut cur = vec![0u32; n];
        for total in 0..=deg as u32 {
            push_graded(&mut exponents, &mut cur, 0, total);
        }
        debug_assert_eq!(exponents.len(), count);
        Ok(EmbeddingSpec { n, deg, dim, order: MonomialOrder::GradedLexV1, exponents })
    }

    /// Exponent vector of every monomial coordinate, in order.
    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn monomials(&self) -> usize {
        self.exponents.len()
    }

    /// Coordinate of the monomial with exponent vector `a`.
    pub fn index_of(&self, a: &[u32]) -> Option<usize> {
        self.exponents.iter().position(|e| e.as_slice() == a)
    }

    pub fn embed(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.embed_into(x, &mut out)?;
        Ok(out)
    }

    pub fn embed_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Domain(format!("expected {} coordinates, got {}", self.n, x.len())));
        }
        if out.len() != self.dim {
            return Err(Error::Domain(format!("output has length {}, expected {}", out.len(), self.dim)));
        }
        let stride = self.deg + 1;
        let mut powers = vec![1.0; self.n * stride];
        for (i, &xi) in x.iter().enumerate() {
            for e in 1..stride {
                powers[i * stride + e] = powers[i * stride + e - 1] * xi;
            }
        }
        for (o, exps) in out.iter_mut().zip(&self.exponents) {
            let mut v = 1.0;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    v *= powers[i * stride + e as usize];
                }
            }
            *o = v;
        }
        out[self.exponents.len()..].fill(0.0);
        if let Some(i) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::Range(format!("monomial {i} overflowed")));
        }
        Ok(())
    }
}

fn push_graded(out: &mut Vec<Vec<u32>>, cur: &mut [u32], pos: usize, remaining: u32) {
    if pos == cur.len() - 1 {
        cur[pos] = remaining;
        out.push(cur.to_vec());
        cur[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        push_graded(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(monomial_count(2, 2), Some(6));
        assert_eq!(monomial_count(1, 3), Some(4));
        assert_eq!(monomial_count(3, 8), Some(165));
        assert_eq!(monomial_count(16, 32), Some(2_254_848_913_647));
        assert_eq!(monomial_count(1000, 1000), None);
    }

    #[test]
    fn graded_lex_order() {
        let e = EmbeddingSpec::new(2, 2, None).unwrap();
        let want: Vec<Vec<u32>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]];
        assert_eq!(e.exponents(), want.as_slice());
    }

    #[test]
    fn zero_input_keeps_constant() {
        let e = EmbeddingSpec::new(2, 2, None).unwrap();
        assert_eq!(e.embed(&[0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn powers_of_two() {
        let e = EmbeddingSpec::new(1, 3, None).unwrap();
        assert_eq!(e.embed(&[2.0]).unwrap(), vec![1.0, 2.0, 4.0, 8.0]);
    }

    #[test]
    fn zero_padding() {
        let e = EmbeddingSpec::new(1, 2, Some(6)).unwrap();
        assert_eq!(e.embed(&[3.0]).unwrap(), vec![1.0, 3.0, 9.0, 0.0, 0.0, 0.0]);
        assert!(EmbeddingSpec::new(2, 2, Some(5)).is_err());
    }

    #[test]
    fn errors() {
        let e = EmbeddingSpec::new(2, 2, None).unwrap();
        assert!(e.embed(&[1.0]).is_err());
        let big = EmbeddingSpec::new(1, 400, None).unwrap();
        assert!(matches!(big.embed(&[1e10]), Err(Error::Range(_))));
        assert!(EmbeddingSpec::new(16, 32, None).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let e = EmbeddingSpec::new(3, 4, Some(40)).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains("graded_lex_v1"));
        let back: EmbeddingSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<EmbeddingSpec>(r#"{"n":2,"deg":2,"dim":3,"order":"graded_lex_v1"}"#).is_err());
    }
}
