//! The small finite fields used by Paley graphs.

use std::fmt;

use super::TargetError;

/// Element of `F_q`; for `q = 9` the value `a + 3b` encodes `a + b·x` in
/// `F₃[x]/(x²+1)`, otherwise the value is the residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    q: u8,
    value: u8,
}

impl FieldElement {
    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn value(&self) -> usize {
        self.value as usize
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 9 {
            write!(f, "{}+{}x", self.value % 3, self.value / 3)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Addition and multiplication tables, validated against the field axioms on
/// construction.
#[derive(Debug, Clone)]
pub struct Field {
    q: usize,
    add: Vec<Vec<u8>>,
    mul: Vec<Vec<u8>>,
}

impl Field {
    pub fn new(q: usize) -> Result<Self, TargetError> {
        let (add, mul): (Vec<Vec<u8>>, Vec<Vec<u8>>) = match q {
            5 | 13 => (
                (0..q).map(|a| (0..q).map(|b| ((a + b) % q) as u8).collect()).collect(),
                (0..q).map(|a| (0..q).map(|b| (a * b % q) as u8).collect()).collect(),
            ),
            9 => {
                let split = |v: usize| (v % 3, v / 3);
                let join = |a: usize, b: usize| (a % 3 + 3 * (b % 3)) as u8;
                let add = (0..9)
                    .map(|u| {
                        (0..9)
                            .map(|v| {
                                let ((a, b), (c, d)) = (split(u), split(v));
                                join(a + c, b + d)
                            })
                            .collect()
                    })
                    .collect();
                // (a + bx)(c + dx) = ac - bd + (ad + bc)x since x² = -1
                let mul = (0..9)
                    .map(|u| {
                        (0..9)
                            .map(|v| {
                                let ((a, b), (c, d)) = (split(u), split(v));
                                join(a * c + 2 * b * d, a * d + b * c)
                            })
                            .collect()
                    })
                    .collect();
                (add, mul)
            }
            _ => return Err(TargetError::UnsupportedOrder(q)),
        };
        let f = Field { q, add, mul };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), TargetError> {
        let q = self.q;
        let bad = |what: &str| Err(TargetError::FieldTable(format!("F{q}: {what}")));
        for a in 0..q {
            if self.add[0][a] as usize != a || self.mul[1][a] as usize != a {
                return bad("identity");
            }
            if !(0..q).any(|b| self.add[a][b] == 0) {
                return bad("additive inverse");
            }
            if a != 0 && !(0..q).any(|b| self.mul[a][b] == 1) {
                return bad("multiplicative inverse");
            }
            for b in 0..q {
                if self.add[a][b] != self.add[b][a] || self.mul[a][b] != self.mul[b][a] {
                    return bad("commutativity");
                }
                for c in 0..q {
                    let (ab, bc) = (self.add[a][b] as usize, self.add[b][c] as usize);
                    if self.add[ab][c] != self.add[a][bc] {
                        return bad("additive associativity");
                    }
                    let (ab, bc) = (self.mul[a][b] as usize, self.mul[b][c] as usize);
                    if self.mul[ab][c] != self.mul[a][bc] {
                        return bad("multiplicative associativity");
                    }
                    let lhs = self.mul[a][self.add[b][c] as usize];
                    let rhs = self.add[self.mul[a][b] as usize][self.mul[a][c] as usize];
                    if lhs != rhs {
                        return bad("distributivity");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn element(&self, value: usize) -> FieldElement {
        assert!(value < self.q, "element out of range");
        FieldElement {
            q: self.q as u8,
            value: value as u8,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|v| self.element(v))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.element(self.add[a.value()][b.value()] as usize)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.element(self.mul[a.value()][b.value()] as usize)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let v = (0..self.q).find(|&b| self.add[a.value()][b] == 0).expect("validated");
        self.element(v)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Nonzero squares, by exhaustive squaring.
    pub fn squares(&self) -> Vec<FieldElement> {
        let mut s: Vec<FieldElement> = self.elements().skip(1).map(|x| self.mul(x, x)).collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        a.value() != 0 && self.squares().contains(&a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares() {
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.squares().iter().map(FieldElement::value).collect::<Vec<_>>(), vec![1, 4]);
        let f9 = Field::new(9).unwrap();
        // 1, 2, x, 2x
        assert_eq!(f9.squares().iter().map(FieldElement::value).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        assert_eq!(Field::new(13).unwrap().squares().len(), 6);
    }

    #[test]
    fn unsupported() {
        assert!(Field::new(7).is_err());
        assert!(Field::new(4).is_err());
    }

    #[test]
    fn x_squared_is_minus_one() {
        let f9 = Field::new(9).unwrap();
        let x = f9.element(3);
        assert_eq!(f9.mul(x, x), f9.element(2));
        assert_eq!(x.to_string(), "0+1x");
    }
}
