//! Finite-dimensional commutative unital algebras over the rationals and
//! their derivations.
//!
//! Every axiom is checked on basis tuples only. This is enough because each
//! identity is multilinear in its arguments: if it holds for all basis
//! elements, it holds for every rational combination of them.

use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{format_rat, rat, Rat, RatMatrix};
use crate::report::{tuple, ValidationReport};

/// Coefficient vector of an algebra element in the basis `e_0..e_{d-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AElem(pub Vec<Rat>);

impl AElem {
    pub fn zero(dim: usize) -> Self {
        AElem(vec![Rat::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Rat::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        AElem(xs.iter().map(|&x| rat(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        AElem(self.0.iter().map(|x| x * c).collect())
    }

    pub fn scale_int(&self, c: i32) -> Self {
        match c {
            1 => self.clone(),
            -1 => -self.clone(),
            _ => self.scale(&rat(c as i64)),
        }
    }

    /// Terse text form, e.g. `[1, -2/3]`.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(format_rat).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl Add for AElem {
    type Output = AElem;
    fn add(mut self, rhs: AElem) -> AElem {
        self += &rhs;
        self
    }
}

impl Sub for AElem {
    type Output = AElem;
    fn sub(mut self, rhs: AElem) -> AElem {
        self -= &rhs;
        self
    }
}

impl AddAssign<&AElem> for AElem {
    fn add_assign(&mut self, rhs: &AElem) {
        debug_assert_eq!(self.dim(), rhs.dim());
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&AElem> for AElem {
    fn sub_assign(&mut self, rhs: &AElem) {
        debug_assert_eq!(self.dim(), rhs.dim());
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl Neg for AElem {
    type Output = AElem;
    fn neg(self) -> AElem {
        AElem(self.0.into_iter().map(|x| -x).collect())
    }
}

/// Commutative unital algebra given by structure constants:
/// `e_i e_j = Σ_k mult[i][j].0[k] e_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommAlg {
    dim: usize,
    mult: Vec<Vec<AElem>>,
    unit: AElem,
}

impl CommAlg {
    /// Checks shapes only; the algebra axioms are checked by [`alg_validate`].
    pub fn new(dim: usize, mult: Vec<Vec<AElem>>, unit: AElem) -> Result<Self> {
        if mult.len() != dim {
            return Err(Error::DimensionMismatch { what: "structure constant rows", expected: dim, found: mult.len() });
        }
        for row in &mult {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: "structure constant columns",
                    expected: dim,
                    found: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|p| p.dim() != dim) {
                return Err(Error::DimensionMismatch { what: "product coefficients", expected: dim, found: bad.dim() });
            }
        }
        if unit.dim() != dim {
            return Err(Error::DimensionMismatch { what: "unit", expected: dim, found: unit.dim() });
        }
        Ok(Self { dim, mult, unit })
    }

    /// The ground field `ℚ`.
    pub fn rationals() -> Self {
        Self::truncated_polynomials(1)
    }

    /// `ℚ[x]/(x^k)` with basis `1, x, .., x^{k-1}`.
    pub fn truncated_polynomials(k: usize) -> Self {
        assert!(k >= 1);
        let mult = (0..k)
            .map(|i| (0..k).map(|j| if i + j < k { AElem::basis(k, i + j) } else { AElem::zero(k) }).collect())
            .collect();
        Self { dim: k, mult, unit: AElem::basis(k, 0) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &AElem {
        &self.unit
    }

    /// The product `e_i e_j` as given by the table.
    pub fn basis_product(&self, i: usize, j: usize) -> &AElem {
        &self.mult[i][j]
    }

    pub fn zero(&self) -> AElem {
        AElem::zero(self.dim)
    }

    pub fn one(&self) -> AElem {
        self.unit.clone()
    }

    pub fn basis(&self, i: usize) -> AElem {
        AElem::basis(self.dim, i)
    }

    pub fn constant(&self, c: &Rat) -> AElem {
        self.unit.scale(c)
    }

    /// Bilinear extension of the structure constants. Callers must pass
    /// elements of this algebra; see [`CommAlg::try_mul`] for the checked
    /// variant.
    pub fn mul(&self, a: &AElem, b: &AElem) -> AElem {
        let mut out = self.zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, m) in self.mult[i][j].0.iter().enumerate() {
                    if !m.is_zero() {
                        out.0[k] += &c * m;
                    }
                }
            }
        }
        out
    }

    pub fn try_mul(&self, a: &AElem, b: &AElem) -> Result<AElem> {
        self.check_elem(a)?;
        self.check_elem(b)?;
        Ok(self.mul(a, b))
    }

    pub fn check_elem(&self, a: &AElem) -> Result<()> {
        if a.dim() != self.dim {
            return Err(Error::ParentMismatch(format!(
                "element of dimension {} in algebra of dimension {}",
                a.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Matrix of multiplication by `a` acting on coefficient vectors.
    pub fn mul_matrix(&self, a: &AElem) -> RatMatrix {
        let cols: Vec<Vec<Rat>> = (0..self.dim).map(|j| self.mul(a, &self.basis(j)).0).collect();
        RatMatrix::from_columns(self.dim, &cols)
    }
}

/// Checks commutativity, associativity and the unit law on basis tuples.
pub fn alg_validate(a: &CommAlg) -> ValidationReport {
    let mut report = ValidationReport::new();
    let d = a.dim;
    for i in 0..d {
        for j in 0..d {
            if a.mult[i][j] != a.mult[j][i] {
                report.push_first(
                    "commutativity",
                    tuple(&[i, j]),
                    format!("{} != {}", a.mult[i][j].display(), a.mult[j][i].display()),
                );
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let left = a.mul(&a.mult[i][j], &a.basis(k));
                let right = a.mul(&a.basis(i), &a.mult[j][k]);
                if left != right {
                    report.push_first(
                        "associativity",
                        tuple(&[i, j, k]),
                        format!("{} != {}", left.display(), right.display()),
                    );
                }
            }
        }
    }
    for i in 0..d {
        let e = a.basis(i);
        if a.mul(&a.unit, &e) != e {
            report.push_first("unit", tuple(&[i]), "unit * e_i != e_i");
        }
    }
    report
}

pub fn alg_mul(alg: &CommAlg, a: &AElem, b: &AElem) -> Result<AElem> {
    alg.try_mul(a, b)
}

/// A rational-linear map `A -> A`; column `c` holds the image of `e_c`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    matrix: RatMatrix,
}

impl Derivation {
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                what: "derivation matrix",
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: RatMatrix::zeros(dim, dim) }
    }

    /// Builds the derivation from the images of the basis elements.
    pub fn from_images(images: &[AElem]) -> Result<Self> {
        let d = images.len();
        if let Some(bad) = images.iter().find(|x| x.dim() != d) {
            return Err(Error::DimensionMismatch { what: "derivation image", expected: d, found: bad.dim() });
        }
        let cols: Vec<Vec<Rat>> = images.iter().map(|x| x.0.clone()).collect();
        Ok(Self { matrix: RatMatrix::from_columns(d, &cols) })
    }

    /// The linear map `x^j ↦ j x^{j-1}` on `ℚ[x]/(x^k)`. For `k ≥ 2` this is
    /// not a derivation of the truncated algebra: Leibniz fails on
    /// `x · x^{k-1}`, whose product is zero while `k x^{k-1}` is not.
    pub fn d_dx(k: usize) -> Self {
        let images: Vec<AElem> = (0..k)
            .map(|j| if j == 0 { AElem::zero(k) } else { AElem::basis(k, j - 1).scale(&rat(j as i64)) })
            .collect();
        Self::from_images(&images).expect("square")
    }

    /// The Euler derivation `x d/dx`, i.e. `x^j ↦ j x^j`, on `ℚ[x]/(x^k)`.
    pub fn euler(k: usize) -> Self {
        let images: Vec<AElem> = (0..k).map(|j| AElem::basis(k, j).scale(&rat(j as i64))).collect();
        Self::from_images(&images).expect("square")
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, a: &AElem) -> AElem {
        AElem(self.matrix.mul_vec(&a.0).expect("derivation applied inside its algebra"))
    }

    /// The image of the basis element `e_c`.
    pub fn image(&self, c: usize) -> AElem {
        AElem(self.matrix.column(c))
    }

    /// `a · D`, i.e. `b ↦ a D(b)`.
    pub fn left_mul(&self, alg: &CommAlg, a: &AElem) -> Derivation {
        Derivation { matrix: alg.mul_matrix(a).mul(&self.matrix).expect("square") }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation { matrix: self.matrix.add(&other.matrix).expect("same shape") }
    }
}

/// Checks the Leibniz rule on all basis pairs.
pub fn derivation_validate(alg: &CommAlg, dv: &Derivation) -> ValidationReport {
    let mut report = ValidationReport::new();
    if dv.dim() != alg.dim() {
        report.push("shape", tuple(&[dv.dim()]), format!("expected a {0}x{0} matrix", alg.dim()));
        return report;
    }
    for i in 0..alg.dim {
        for j in 0..alg.dim {
            let left = dv.apply(&alg.mult[i][j]);
            let right = alg.mul(&dv.image(i), &alg.basis(j)) + alg.mul(&alg.basis(i), &dv.image(j));
            if left != right {
                report.push_first("leibniz", tuple(&[i, j]), format!("{} != {}", left.display(), right.display()));
            }
        }
    }
    report
}

/// Commutator `d1 d2 - d2 d1`.
pub fn der_bracket(d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
    if d1.dim() != d2.dim() {
        return Err(Error::ParentMismatch("derivations of different algebras".into()));
    }
    let ab = d1.matrix.mul(&d2.matrix)?;
    let ba = d2.matrix.mul(&d1.matrix)?;
    Ok(Derivation { matrix: ab.sub(&ba)? })
}
