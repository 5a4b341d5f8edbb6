//! Generator matrices of weighted evaluation codes, the bordered variant with
//! an extra coordinate at the point zero, and Hermitian inner products.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval_sets::{subgroup_set, EvalSet};
use crate::field::{Elt, Field, FieldSpec};
use crate::numtheory::mul_mod;

/// `k` rows of `n` field elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMatrix {
    rows: Vec<Vec<Elt>>,
}

impl GeneratorMatrix {
    pub fn new(rows: Vec<Vec<Elt>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch(n, bad.len()));
        }
        Ok(Self { rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<Elt>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<Elt> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// One line per row, tokens `z` or a decimal exponent.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let mut first = true;
            for e in row {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(field: &Field, text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().map(|t| field.parse_elt(t)).collect())
            .collect::<Result<Vec<Vec<Elt>>>>()?;
        Self::new(rows)
    }
}

/// The extra coordinate of a bordered code: evaluation at zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Border {
    /// The integer `(q+1)/m` placed in the corner, as a prime-field element.
    pub unscaled_corner: Elt,
    /// Corner after folding: a `(q+1)`-th root of the unscaled value.
    pub corner: Elt,
}

/// A generator matrix together with the data that produced it.
#[derive(Debug, Clone)]
pub struct CodeArtifact {
    pub field: Arc<Field>,
    pub matrix: GeneratorMatrix,
    pub evalset: EvalSet,
    /// Row `t` evaluates `u^{shift + t}`.
    pub shift: u64,
    pub border: Option<Border>,
}

impl CodeArtifact {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn k(&self) -> usize {
        self.matrix.k()
    }

    /// The matrix before weights were folded in: entries `u^{shift+t}` (and
    /// the literal corner for bordered codes).
    pub fn unscaled_matrix(&self) -> GeneratorMatrix {
        let f = &self.field;
        let rows = (0..self.k())
            .map(|t| {
                let mut row = Vec::with_capacity(self.n());
                if let Some(b) = &self.border {
                    row.push(if t == 0 { b.unscaled_corner } else { Elt::ZERO });
                }
                let power = self.shift + t as u64;
                row.extend(self.evalset.points.iter().map(|&u| {
                    f.pow_theta(mul_mod(u.raw(), power, f.order()) as i128)
                }));
                row
            })
            .collect();
        GeneratorMatrix { rows }
    }

    pub fn to_json(&self) -> ArtifactJson {
        ArtifactJson {
            field: self.field.spec(),
            shift: self.shift,
            n: self.n(),
            k: self.k(),
            evalset: self.evalset.clone(),
            border: self.border.clone(),
            matrix: self.matrix.rows.clone(),
        }
    }
}

/// Serialized form of an artifact; enough to rebuild and recheck it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArtifactJson {
    pub field: FieldSpec,
    pub shift: u64,
    pub n: usize,
    pub k: usize,
    pub evalset: EvalSet,
    pub border: Option<Border>,
    pub matrix: Vec<Vec<Elt>>,
}

impl ArtifactJson {
    /// Rebuilds the canonical field and checks the stored description
    /// matches it.
    pub fn into_artifact(self) -> Result<CodeArtifact> {
        let field = Field::new(self.field.p, self.field.h)?;
        if field.spec() != self.field {
            return Err(Error::Parse("field description is not canonical".into()));
        }
        let matrix = GeneratorMatrix::new(self.matrix)?;
        if matrix.k() != self.k || matrix.n() != self.n {
            return Err(Error::Parse(format!(
                "matrix is {}x{}, header says {}x{}",
                matrix.k(),
                matrix.n(),
                self.k,
                self.n
            )));
        }
        for e in matrix.rows.iter().flatten() {
            if e.exponent().is_some_and(|x| x >= field.order()) {
                return Err(Error::Parse(format!("element {e} out of range")));
            }
        }
        Ok(CodeArtifact {
            field: Arc::new(field),
            matrix,
            evalset: self.evalset,
            shift: self.shift,
            border: self.border,
        })
    }
}

/// Rows `t = 0..k-1` with entries `s_j·u_j^{shift+t}`, where `s_j` is the
/// canonical `(q+1)`-th root of the weight `w_j`.
pub fn eval_code(field: Arc<Field>, evalset: EvalSet, k: usize, shift: u64) -> Result<CodeArtifact> {
    let n = evalset.len();
    if k == 0 || k > n {
        return Err(Error::DimensionTooLarge { k, n });
    }
    let scales = evalset
        .weights
        .iter()
        .map(|&w| field.norm_root(w))
        .collect::<Result<Vec<Elt>>>()?;
    let order = field.order();
    let rows = (0..k as u64)
        .map(|t| {
            let power = shift + t;
            evalset
                .points
                .iter()
                .zip(&scales)
                .map(|(&u, &s)| {
                    let e = mul_mod(u.raw(), power % order, order);
                    field.mul(s, field.pow_theta(e as i128))
                })
                .collect()
        })
        .collect();
    Ok(CodeArtifact {
        matrix: GeneratorMatrix { rows },
        evalset,
        shift,
        border: None,
        field,
    })
}

/// Bordered code on the subgroup of index `m`: a leading column
/// `(a, 0, …, 0)` and rows `u^0, …, u^{k-1}`, where `a^{q+1} = (q+1)/m`.
pub fn extend_c1(field: Arc<Field>, m: u64, k: usize) -> Result<CodeArtifact> {
    let q = field.q();
    if m % 2 == 0 || (q + 1) % m != 0 {
        return Err(Error::HypothesisViolated(format!("{m} is not an odd divisor of q+1")));
    }
    let evalset = subgroup_set(&field, m)?;
    let n = evalset.len() + 1;
    if k < 2 || k > n {
        return Err(Error::DimensionTooLarge { k, n });
    }
    let unscaled_corner = field.from_int(((q + 1) / m % field.p()) as i64);
    let corner = field.norm_root(unscaled_corner)?;
    let order = field.order();
    let rows = (0..k as u64)
        .map(|t| {
            let mut row = Vec::with_capacity(n);
            row.push(if t == 0 { corner } else { Elt::ZERO });
            row.extend(
                evalset
                    .points
                    .iter()
                    .map(|u| field.pow_theta(mul_mod(u.raw(), t, order) as i128)),
            );
            row
        })
        .collect();
    Ok(CodeArtifact {
        matrix: GeneratorMatrix { rows },
        evalset,
        shift: 0,
        border: Some(Border {
            unscaled_corner,
            corner,
        }),
        field,
    })
}

/// ⟨u, v⟩ = Σ u_i v_i^q.
pub fn hermitian_ip(field: &Field, u: &[Elt], v: &[Elt]) -> Result<Elt> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    let conj: Vec<Elt> = v.iter().map(|&x| field.frobenius_q(x)).collect();
    Ok(ip_with_conjugate(field, u, &conj))
}

fn ip_with_conjugate(field: &Field, u: &[Elt], conj: &[Elt]) -> Elt {
    let order = field.order();
    field.sum_exponents(u.iter().zip(conj).filter_map(|(a, b)| {
        let (a, b) = (a.exponent()?, b.exponent()?);
        let s = a + b;
        Some(if s >= order { s - order } else { s })
    }))
}

/// Full Hermitian Gram matrix `G[i][j] = ⟨row_i, row_j⟩`.
pub fn gram_hermitian(field: &Field, matrix: &GeneratorMatrix) -> Vec<Vec<Elt>> {
    let conj: Vec<Vec<Elt>> = matrix
        .rows
        .iter()
        .map(|r| r.iter().map(|&x| field.frobenius_q(x)).collect())
        .collect();
    matrix
        .rows
        .iter()
        .map(|r| conj.iter().map(|c| ip_with_conjugate(field, r, c)).collect())
        .collect()
}

/// First nonzero Gram entry `(i, j)` with `i <= j`, if any. The lower
/// triangle is the Frobenius image of the upper one, so this decides
/// self-orthogonality; rows are conjugated one at a time.
pub fn first_nonzero_gram_entry(field: &Field, matrix: &GeneratorMatrix) -> Option<(usize, usize)> {
    for j in 0..matrix.k() {
        let conj: Vec<Elt> = matrix.rows[j].iter().map(|&x| field.frobenius_q(x)).collect();
        for i in 0..=j {
            if !ip_with_conjugate(field, &matrix.rows[i], &conj).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn gf(q: u64) -> Arc<Field> {
        Arc::new(Field::for_q(q).unwrap())
    }

    #[test]
    fn c1_small_matrix_shape_and_gram() {
        let f = gf(5);
        let set = subgroup_set(&f, 3).unwrap();
        let art = eval_code(f.clone(), set, 2, 1).unwrap();
        assert_eq!((art.k(), art.n()), (2, 8));
        for (t, row) in art.matrix.rows().iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let expected = f.pow_theta((3 * j as u64 * (t as u64 + 1)) as i128);
                assert_eq!(x, expected);
            }
        }
        assert!(first_nonzero_gram_entry(&f, &art.matrix).is_none());
        let gram = gram_hermitian(&f, &art.matrix);
        assert!(gram.iter().flatten().all(|e| e.is_zero()));
    }

    #[test]
    fn c1_dimension_three_breaks_at_expected_entry() {
        // 6 + t1 + 5 t2 = 8 at (t1, t2) = (2, 0)
        let f = gf(5);
        let art = eval_code(f.clone(), subgroup_set(&f, 3).unwrap(), 3, 1).unwrap();
        let gram = gram_hermitian(&f, &art.matrix);
        for (t1, row) in gram.iter().enumerate() {
            for (t2, e) in row.iter().enumerate() {
                let hit = (6 + t1 + 5 * t2) % 8 == 0;
                assert_eq!(!e.is_zero(), hit, "({t1},{t2})");
            }
        }
        assert_eq!(first_nonzero_gram_entry(&f, &art.matrix), Some((0, 2)));
    }

    #[test]
    fn all_ones_row() {
        let f = gf(7);
        let art = eval_code(f.clone(), subgroup_set(&f, 6).unwrap(), 1, 0).unwrap();
        assert!(art.matrix.rows()[0].iter().all(|&e| e == Elt::ONE));
        let ones = &art.matrix.rows()[0];
        assert_eq!(hermitian_ip(&f, ones, ones).unwrap(), f.from_int(8));
        let zeros = vec![Elt::ZERO; ones.len()];
        assert_eq!(hermitian_ip(&f, &zeros, ones).unwrap(), Elt::ZERO);
        assert_eq!(hermitian_ip(&f, &zeros[1..], ones), Err(Error::LengthMismatch(7, 8)));
    }

    #[test]
    fn dimension_guard() {
        let f = gf(5);
        let set = subgroup_set(&f, 3).unwrap();
        assert_eq!(
            eval_code(f.clone(), set.clone(), 9, 1).unwrap_err(),
            Error::DimensionTooLarge { k: 9, n: 8 }
        );
        assert!(eval_code(f, set, 0, 1).is_err());
    }

    #[test]
    fn bordered_code_small() {
        let f = gf(5);
        let art = extend_c1(f.clone(), 3, 2).unwrap();
        assert_eq!((art.k(), art.n()), (2, 9));
        let b = art.border.clone().unwrap();
        assert_eq!(b.unscaled_corner, f.from_int(2));
        assert_eq!(f.norm(b.corner), f.from_int(2));
        assert!(art.matrix.rows()[0][1..].iter().all(|&e| e == Elt::ONE));
        assert_eq!(art.matrix.rows()[1][0], Elt::ZERO);
        assert_eq!(art.matrix.rows()[1][1], Elt::ONE);
        assert!(gram_hermitian(&f, &art.matrix).iter().flatten().all(|e| e.is_zero()));
        // the literal corner 2 gives 2·2^5 + 8 = 4 + 3 = 2 in GF(5), not zero
        let literal = art.unscaled_matrix();
        assert_eq!(literal.rows()[0][0], f.from_int(2));
        assert!(!gram_hermitian(&f, &literal)[0][0].is_zero());
    }

    #[test]
    fn bordered_code_seventeen() {
        let f = gf(17);
        let art = extend_c1(f.clone(), 9, 9).unwrap();
        assert_eq!((art.k(), art.n()), (9, 33));
        assert!(first_nonzero_gram_entry(&f, &art.matrix).is_none());
    }

    #[test]
    fn folding_matches_weighted_sums() {
        // Σ_j w_j g_{j,t1} g_{j,t2}^q computed on the unscaled rows equals the
        // Gram entry of the scaled rows.
        let f = gf(13);
        let set = crate::eval_sets::weighted_union(&f, &[7, 6], crate::eval_sets::WeightRule::Mixed {
            h: crate::eval_sets::find_h(&f, 7, 6).unwrap(),
        })
        .unwrap();
        let art = eval_code(f.clone(), set.clone(), 7, 0).unwrap();
        let raw = art.unscaled_matrix();
        let scaled = gram_hermitian(&f, &art.matrix);
        for t1 in 0..7 {
            for t2 in 0..7 {
                let direct = f.sum((0..set.len()).map(|j| {
                    let g1 = raw.rows()[t1][j];
                    let g2 = f.frobenius_q(raw.rows()[t2][j]);
                    f.mul(set.weights[j], f.mul(g1, g2))
                }));
                assert_eq!(direct, scaled[t1][t2]);
            }
        }
    }

    #[test]
    fn conjugate_symmetry_on_random_vectors() {
        let f = gf(9);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut draw = |len: usize| -> Vec<Elt> {
            (0..len)
                .map(|_| {
                    let e: u64 = rng.gen_range(0..=f.order());
                    if e == f.order() { Elt::ZERO } else { f.pow_theta(e as i128) }
                })
                .collect()
        };
        for _ in 0..50 {
            let (u, v) = (draw(12), draw(12));
            assert_eq!(
                hermitian_ip(&f, &u, &v).unwrap(),
                f.frobenius_q(hermitian_ip(&f, &v, &u).unwrap())
            );
        }
    }

    #[test]
    fn text_round_trip() {
        let f = gf(5);
        let art = extend_c1(f.clone(), 3, 3).unwrap();
        let text = art.matrix.to_text();
        assert!(text.starts_with(&format!("{} 0 0", art.matrix.rows()[0][0])));
        assert_eq!(GeneratorMatrix::from_text(&f, &text).unwrap(), art.matrix);
        let json = serde_json::to_string(&art.to_json()).unwrap();
        let back: ArtifactJson = serde_json::from_str(&json).unwrap();
        let rebuilt = back.into_artifact().unwrap();
        assert_eq!(rebuilt.matrix, art.matrix);
        assert_eq!(rebuilt.border, art.border);
    }
}
