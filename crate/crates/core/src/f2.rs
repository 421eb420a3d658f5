//! Linear algebra over F₂ on packed 64-bit words.
//!
//! Coordinate `i` of a vector lives in bit `i`. Bit strings are written with
//! coordinate 0 first, so `"110"` has coordinates 0 and 1 set.

use std::fmt;
use std::ops::{Add, AddAssign};

use thiserror::Error;

pub const MAX_DIM: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("dimension {0} exceeds {MAX_DIM}")]
    DimTooLarge(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("bits set above dimension {0}")]
    StrayBits(usize),
    #[error("invalid bit string {0:?}")]
    BadBitString(String),
    #[error("system is infeasible")]
    Infeasible,
    #[error("no member of the affine space has the requested dot product")]
    NoMemberWithDot,
}

#[inline]
pub fn mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

#[inline]
pub fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    dim: u8,
    bits: u64,
}

impl F2Vector {
    pub fn new(dim: usize, bits: u64) -> Result<Self, F2Error> {
        if dim > MAX_DIM {
            return Err(F2Error::DimTooLarge(dim));
        }
        if bits & !mask(dim) != 0 {
            return Err(F2Error::StrayBits(dim));
        }
        Ok(F2Vector { dim: dim as u8, bits })
    }

    /// Like [`F2Vector::new`] but silently truncates to `dim` bits.
    pub fn truncated(dim: usize, bits: u64) -> Self {
        assert!(dim <= MAX_DIM);
        F2Vector {
            dim: dim as u8,
            bits: bits & mask(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::truncated(dim, 0)
    }

    pub fn ones(dim: usize) -> Self {
        Self::truncated(dim, u64::MAX)
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        Self::truncated(dim, 1 << i)
    }

    /// Parses a bit string, coordinate 0 first.
    pub fn from_bitstring(s: &str) -> Result<Self, F2Error> {
        if s.len() > MAX_DIM {
            return Err(F2Error::DimTooLarge(s.len()));
        }
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(F2Error::BadBitString(s.to_string())),
            }
        }
        Ok(F2Vector {
            dim: s.len() as u8,
            bits,
        })
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.dim())
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn with(&self, i: usize, value: bool) -> Self {
        assert!(i < self.dim());
        let bits = if value {
            self.bits | (1 << i)
        } else {
            self.bits & !(1 << i)
        };
        F2Vector { bits, ..*self }
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Dot product; panics on a dimension mismatch (see [`F2Vector::try_dot`]).
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.dim, other.dim, "dot of vectors with different dimensions");
        parity(self.bits & other.bits)
    }

    pub fn try_dot(&self, other: &F2Vector) -> Result<bool, F2Error> {
        if self.dim != other.dim {
            return Err(F2Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(parity(self.bits & other.bits))
    }

    /// Lowest set coordinate.
    pub fn leading(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    /// `prefix` followed by `self`'s coordinates.
    pub fn prepend(&self, prefix: &[bool]) -> Self {
        let k = prefix.len();
        let mut bits = self.bits << k;
        for (i, &b) in prefix.iter().enumerate() {
            bits |= (b as u64) << i;
        }
        Self::truncated(self.dim() + k, bits)
    }

    /// Same coordinates padded with zeros to `dim`.
    pub fn padded(&self, dim: usize) -> Self {
        assert!(dim >= self.dim());
        Self::truncated(dim, self.bits)
    }
}

impl Add for F2Vector {
    type Output = F2Vector;

    fn add(self, rhs: F2Vector) -> F2Vector {
        assert_eq!(self.dim, rhs.dim);
        F2Vector {
            dim: self.dim,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl AddAssign for F2Vector {
    fn add_assign(&mut self, rhs: F2Vector) {
        *self = *self + rhs;
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2[{}]", self.to_bitstring())
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// Rows of a common dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn new(cols: usize, rows: Vec<F2Vector>) -> Result<Self, F2Error> {
        if cols > MAX_DIM {
            return Err(F2Error::DimTooLarge(cols));
        }
        if let Some(r) = rows.iter().find(|r| r.dim() != cols) {
            return Err(F2Error::DimMismatch(r.dim(), cols));
        }
        Ok(F2Matrix { cols, rows })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        echelon(&self.rows).len()
    }
}

/// Fully reduced row echelon form of the span of `vectors`: independent rows,
/// leading coordinates strictly ascending, each leading coordinate cleared in
/// every other row. Canonical for the spanned subspace.
pub fn echelon(vectors: &[F2Vector]) -> Vec<F2Vector> {
    let Some(dim) = vectors.first().map(F2Vector::dim) else {
        return Vec::new();
    };
    let mut rows: Vec<u64> = vectors.iter().map(F2Vector::bits).collect();
    let mut out: Vec<u64> = Vec::new();
    for col in 0..dim {
        let bit = 1u64 << col;
        let Some(p) = rows.iter().position(|&r| r & bit != 0) else {
            continue;
        };
        let pivot = rows.swap_remove(p);
        for r in rows.iter_mut().chain(out.iter_mut()) {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        out.push(pivot);
    }
    out.into_iter().map(|b| F2Vector::truncated(dim, b)).collect()
}

/// Smallest word in `offset + span(basis)`: eliminate on the highest bit first.
fn min_member(offset: u64, basis: &[F2Vector]) -> u64 {
    let mut rows: Vec<u64> = basis.iter().map(F2Vector::bits).collect();
    let mut top: Vec<u64> = Vec::new();
    while let Some(i) = (0..rows.len()).max_by_key(|&i| rows[i]) {
        let r = rows.swap_remove(i);
        if r == 0 {
            break;
        }
        let high = 63 - r.leading_zeros();
        for x in rows.iter_mut() {
            if *x >> high & 1 == 1 {
                *x ^= r;
            }
        }
        top.push(r);
    }
    top.iter().fold(offset, |acc, &r| {
        if acc >> (63 - r.leading_zeros()) & 1 == 1 {
            acc ^ r
        } else {
            acc
        }
    })
}

/// Offset plus the span of a reduced basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    offset: F2Vector,
    basis: Vec<F2Vector>,
}

impl AffineSubspace {
    /// Canonicalizes: the basis is brought to reduced echelon form and the
    /// offset becomes the member with the smallest packed word.
    pub fn new(offset: F2Vector, basis: &[F2Vector]) -> Result<Self, F2Error> {
        if let Some(b) = basis.iter().find(|b| b.dim() != offset.dim()) {
            return Err(F2Error::DimMismatch(b.dim(), offset.dim()));
        }
        let basis = echelon(basis);
        let offset = F2Vector::truncated(offset.dim(), min_member(offset.bits(), &basis));
        Ok(AffineSubspace { offset, basis })
    }

    pub fn full(dim: usize) -> Self {
        let basis: Vec<F2Vector> = (0..dim).map(|i| F2Vector::unit(dim, i)).collect();
        AffineSubspace {
            offset: F2Vector::zero(dim),
            basis,
        }
    }

    pub fn point(p: F2Vector) -> Self {
        AffineSubspace {
            offset: p,
            basis: Vec::new(),
        }
    }

    pub fn offset(&self) -> F2Vector {
        self.offset
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.dim()
    }

    /// Dimension of the direction space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: &F2Vector) -> bool {
        if x.dim() != self.ambient_dim() {
            return false;
        }
        let mut r = *x + self.offset;
        for b in &self.basis {
            if r.get(b.leading().expect("nonzero basis row")) {
                r += *b;
            }
        }
        r.is_zero()
    }

    /// All `2^dim` members, in the order of the binary counter over basis
    /// coefficients.
    pub fn members(&self) -> impl Iterator<Item = F2Vector> + '_ {
        assert!(self.dim() < 64, "too many members to enumerate");
        (0u64..1 << self.dim()).map(move |c| {
            self.basis
                .iter()
                .enumerate()
                .filter(|(i, _)| (c >> i) & 1 == 1)
                .fold(self.offset, |acc, (_, b)| acc + *b)
        })
    }

    /// True when `x` is orthogonal to every direction vector.
    pub fn direction_orthogonal_to(&self, x: &F2Vector) -> bool {
        self.basis.iter().all(|b| !b.dot(x))
    }
}

/// Solves `A x = b`; `b` has one coordinate per row of `A`.
pub fn solve_affine(a: &F2Matrix, b: &F2Vector) -> Result<AffineSubspace, F2Error> {
    let t = a.cols();
    if b.dim() != a.rows().len() {
        return Err(F2Error::DimMismatch(b.dim(), a.rows().len()));
    }
    // augmented rows: coefficient bits plus right-hand side
    let mut rows: Vec<(u64, bool)> = a
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| (r.bits(), b.get(i)))
        .collect();
    let mut pivots: Vec<(usize, u64, bool)> = Vec::new();
    for col in 0..t {
        let bit = 1u64 << col;
        let Some(p) = rows.iter().position(|&(r, _)| r & bit != 0) else {
            continue;
        };
        let (pr, prhs) = rows.swap_remove(p);
        for (r, rhs) in rows.iter_mut() {
            if *r & bit != 0 {
                *r ^= pr;
                *rhs ^= prhs;
            }
        }
        for (_, r, rhs) in pivots.iter_mut() {
            if *r & bit != 0 {
                *r ^= pr;
                *rhs ^= prhs;
            }
        }
        pivots.push((col, pr, prhs));
    }
    if rows.iter().any(|&(_, rhs)| rhs) {
        return Err(F2Error::Infeasible);
    }
    let pivot_cols: u64 = pivots.iter().fold(0, |acc, &(c, _, _)| acc | (1 << c));
    let mut offset = 0u64;
    for &(c, _, rhs) in &pivots {
        if rhs {
            offset |= 1 << c;
        }
    }
    let mut basis = Vec::new();
    for free in (0..t).filter(|&c| pivot_cols & (1 << c) == 0) {
        let mut v = 1u64 << free;
        for &(c, r, _) in &pivots {
            if r & (1 << free) != 0 {
                v |= 1 << c;
            }
        }
        basis.push(F2Vector::truncated(t, v));
    }
    AffineSubspace::new(F2Vector::truncated(t, offset), &basis)
}

/// Basis of `{x : x·e = 0 for all e in vectors}` inside `F₂^dim`.
pub fn orthogonal_complement(dim: usize, vectors: &[F2Vector]) -> Vec<F2Vector> {
    let m = F2Matrix::new(dim, vectors.to_vec()).expect("common dimension");
    let zero = F2Vector::zero(vectors.len());
    solve_affine(&m, &zero)
        .expect("homogeneous systems are feasible")
        .basis()
        .to_vec()
}

/// Returns a member `v` of `space` with `x·v = target`.
pub fn pick_by_dot(x: &F2Vector, space: &AffineSubspace, target: bool) -> Result<F2Vector, F2Error> {
    if x.dim() != space.ambient_dim() {
        return Err(F2Error::DimMismatch(x.dim(), space.ambient_dim()));
    }
    let o = space.offset();
    if x.dot(&o) == target {
        return Ok(o);
    }
    space
        .basis()
        .iter()
        .find(|e| x.dot(e))
        .map(|e| o + *e)
        .ok_or(F2Error::NoMemberWithDot)
}

/// Iterator over the vectors of `F₂^dim` with exactly `weight` ones, in
/// increasing integer order of their bit patterns.
pub fn enumerate_weight_k(dim: usize, weight: usize) -> WeightK {
    assert!(dim <= MAX_DIM && weight <= dim);
    let first = if weight == 0 { Some(0) } else { Some(mask(weight)) };
    WeightK { dim, next: first }
}

pub struct WeightK {
    dim: usize,
    next: Option<u64>,
}

impl Iterator for WeightK {
    type Item = F2Vector;

    fn next(&mut self) -> Option<F2Vector> {
        let cur = self.next?;
        // Gosper's hack for the next pattern with the same popcount
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (nxt & !mask(self.dim) == 0).then_some(nxt)
            }
        };
        Some(F2Vector::truncated(self.dim, cur))
    }
}

/// All vectors of `F₂^dim` ordered by weight, then by integer value.
pub fn by_weight(dim: usize) -> impl Iterator<Item = F2Vector> {
    (0..=dim).flat_map(move |w| enumerate_weight_k(dim, w))
}
