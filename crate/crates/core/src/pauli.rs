//! Pauli strings with exact phase tracking.
//!
//! A [`PauliString`] is a phase `i^k` times a tensor product of single-qubit
//! Pauli letters keyed by 1-based qubit label. Identity letters are not
//! stored, so two strings with the same non-trivial letters compare equal
//! regardless of register size.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Single-qubit product `self * rhs` as `(i^k, letter)`.
    pub fn mul_with_phase(self, rhs: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, X) => (Phase::I, Y),
            (Y, X) => (Phase::MINUS_I, Z),
            (Z, Y) => (Phase::MINUS_I, X),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    /// Flips the computational basis bit (X or Y).
    pub fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Picks up a sign on |1> (Z or Y).
    pub fn phases(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A phase `i^k`, `k` mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    phase: Phase,
    letters: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(label: usize, p: Pauli) -> Self {
        Self::from_letters(Phase::ONE, [(label, p)])
    }

    pub fn from_letters(phase: Phase, letters: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        let mut out = PauliString {
            phase,
            letters: BTreeMap::new(),
        };
        for (label, p) in letters {
            out.mul_letter(label, p);
        }
        out
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Letter on `label` (identity if absent).
    pub fn get(&self, label: usize) -> Pauli {
        self.letters.get(&label).copied().unwrap_or(Pauli::I)
    }

    /// Non-identity letters in ascending label order.
    pub fn letters(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.letters.iter().map(|(&l, &p)| (l, p))
    }

    pub fn support(&self) -> Vec<usize> {
        self.letters.keys().copied().collect()
    }

    pub fn max_label(&self) -> usize {
        self.letters.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same letters, ignoring the phase.
    pub fn same_letters(&self, other: &PauliString) -> bool {
        self.letters == other.letters
    }

    /// Right-multiplies a single letter onto `label`.
    fn mul_letter(&mut self, label: usize, p: Pauli) {
        let (ph, res) = self.get(label).mul_with_phase(p);
        self.phase = self.phase * ph;
        if res == Pauli::I {
            self.letters.remove(&label);
        } else {
            self.letters.insert(label, res);
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .filter(|(l, &p)| {
                let q = other.get(**l);
                p != q && q != Pauli::I
            })
            .count();
        anti % 2 == 0
    }

    /// Relabels every letter through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> Option<usize>) -> Result<PauliString> {
        let mut letters = BTreeMap::new();
        for (&l, &p) in &self.letters {
            let to = map(l).ok_or(Error::UnknownVertex(l))?;
            letters.insert(to, p);
        }
        Ok(PauliString {
            phase: self.phase,
            letters,
        })
    }
}

impl Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        let mut out = self.clone();
        out.phase = out.phase * rhs.phase;
        for (&l, &p) in &rhs.letters {
            out.mul_letter(l, p);
        }
        out
    }
}

impl Mul for PauliString {
    type Output = PauliString;
    fn mul(self, rhs: PauliString) -> PauliString {
        &self * &rhs
    }
}

/// Ordered product of a sequence of strings; the identity for an empty sequence.
pub fn product<'a>(items: impl IntoIterator<Item = &'a PauliString>) -> PauliString {
    items
        .into_iter()
        .fold(PauliString::identity(), |acc, p| &acc * p)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase)?;
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        let mut first = true;
        for (l, p) in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}{}", p.letter(), l)?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts forms like `+X1 Z2`, `-iY3`, `X9 X11`, `+I`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse {
            line: 1,
            message: format!("{m} in Pauli string {s:?}"),
        };
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::ONE, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else {
            (Phase::ONE, s)
        };
        let rest = rest.trim();
        if rest == "I" || rest.is_empty() {
            return Ok(PauliString::identity().with_phase(phase));
        }
        let mut letters = Vec::new();
        for tok in rest.split_whitespace() {
            let mut chars = tok.chars();
            let p = match chars.next() {
                Some('I') => Pauli::I,
                Some('X') => Pauli::X,
                Some('Y') => Pauli::Y,
                Some('Z') => Pauli::Z,
                _ => return Err(bad("bad letter")),
            };
            let label: usize = chars.as_str().parse().map_err(|_| bad("bad label"))?;
            if label == 0 {
                return Err(bad("labels are 1-based"));
            }
            letters.push((label, p));
        }
        Ok(PauliString::from_letters(phase, letters))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    #[test]
    fn single_letter_products_match_matrices() {
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let (ph, c) = a.mul_with_phase(b);
                let lhs = mat_mul(a.matrix(), b.matrix());
                let rhs = c.matrix();
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((lhs[i][j] - ph.to_complex() * rhs[i][j]).norm() < 1e-15, "{a:?}{b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let p = PauliString::single(1, Pauli::X) * PauliString::single(1, Pauli::Z);
        assert_eq!(p, PauliString::single(1, Pauli::Y).with_phase(Phase::MINUS_I));
        assert_eq!(p.to_string(), "-iY1");
    }

    #[test]
    fn squares_are_phase_squared_identity() {
        let p: PauliString = "-iX1 Y3 Z7".parse().unwrap();
        let sq = &p * &p;
        assert!(sq.is_identity());
        assert_eq!(sq.phase(), p.phase() * p.phase());
    }

    #[test]
    fn display_round_trip() {
        for s in ["+X1 Z2", "-iY3", "+I", "-X9 X11 X13 X15", "+iZ1"] {
            let p: PauliString = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("Q1".parse::<PauliString>().is_err());
        assert!("X0".parse::<PauliString>().is_err());
    }

    #[test]
    fn commutation() {
        let a: PauliString = "X1 Z2".parse().unwrap();
        let b: PauliString = "Z1 X2".parse().unwrap();
        let c: PauliString = "Z1".parse().unwrap();
        assert!(a.commutes_with(&b));
        assert!(!a.commutes_with(&c));
    }
}
