//! Grid-indexed complex multi-arrays with bundle index signatures.
//!
//! An [`IndexedField`] carries an ordered list of fiber slots (Dirac, weak
//! isospin, color, tangent), a net hypercharge weight counting upper minus
//! lower one-dimensional bundle indices, and one complex value per grid
//! point and fiber multi-index. Wave functions, Higgs fields and gauge
//! potentials' expansion coefficients are all stored this way.

use nalgebra::Vector2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridShape;

/// Fiber bundle tags with fixed fiber dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleKind {
    /// Dirac spinor bundle, fiber dimension 4.
    Dirac,
    /// One-dimensional hypercharge bundle. Its indices are tracked as a net
    /// weight rather than as array slots.
    U1,
    /// Weak-isospin doublet bundle, fiber dimension 2.
    Su2,
    /// Color bundle, fiber dimension 3.
    Su3,
    /// Tangent bundle of the chart, fiber dimension 4.
    Tangent,
}

impl BundleKind {
    pub fn dim(self) -> usize {
        match self {
            BundleKind::Dirac | BundleKind::Tangent => 4,
            BundleKind::U1 => 1,
            BundleKind::Su2 => 2,
            BundleKind::Su3 => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Up,
    Down,
}

/// One fiber slot of an index signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub kind: BundleKind,
    pub variance: Variance,
    pub conjugated: bool,
}

impl Slot {
    pub fn up(kind: BundleKind) -> Self {
        Self {
            kind,
            variance: Variance::Up,
            conjugated: false,
        }
    }

    pub fn down(kind: BundleKind) -> Self {
        Self {
            kind,
            variance: Variance::Down,
            conjugated: false,
        }
    }
}

/// Chirality constraint declared by a species.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    Chiral,
    Antichiral,
    None,
}

/// Transformation law of a matter or Higgs species: fiber slots, hypercharge
/// weight and chirality flag.
#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub name: &'static str,
    pub slots: Vec<Slot>,
    pub hypercharge_weight: i32,
    pub chirality: Chirality,
}

/// Hypercharge weights appearing in the species table.
pub const ALLOWED_WEIGHTS: [i32; 7] = [3, -3, -6, 1, 4, -2, 0];

impl Species {
    fn new(
        name: &'static str,
        slots: Vec<Slot>,
        hypercharge_weight: i32,
        chirality: Chirality,
    ) -> Self {
        assert!(
            ALLOWED_WEIGHTS.contains(&hypercharge_weight),
            "weight {hypercharge_weight} not in the species table"
        );
        Self {
            name,
            slots,
            hypercharge_weight,
            chirality,
        }
    }

    /// Higgs doublet, weight +3.
    pub fn higgs() -> Self {
        Self::new("higgs", vec![Slot::up(BundleKind::Su2)], 3, Chirality::None)
    }

    /// Dual Higgs doublet, weight -3.
    pub fn higgs_dual() -> Self {
        Self::new(
            "higgs-dual",
            vec![Slot::up(BundleKind::Su2)],
            -3,
            Chirality::None,
        )
    }

    /// Chiral lepton doublet, weight -3.
    pub fn lepton_doublet() -> Self {
        Self::new(
            "lepton-doublet",
            vec![Slot::up(BundleKind::Dirac), Slot::up(BundleKind::Su2)],
            -3,
            Chirality::Chiral,
        )
    }

    /// Antichiral charged-lepton singlet, weight -6.
    pub fn lepton_singlet() -> Self {
        Self::new(
            "lepton-singlet",
            vec![Slot::up(BundleKind::Dirac)],
            -6,
            Chirality::Antichiral,
        )
    }

    /// Complete charged-lepton wave function, weight -6, no chirality.
    pub fn charged_lepton() -> Self {
        Self::new(
            "charged-lepton",
            vec![Slot::up(BundleKind::Dirac)],
            -6,
            Chirality::None,
        )
    }

    /// Chiral neutrino singlet, weight 0.
    pub fn neutrino() -> Self {
        Self::new(
            "neutrino",
            vec![Slot::up(BundleKind::Dirac)],
            0,
            Chirality::Chiral,
        )
    }

    /// Chiral quark doublet, weight +1.
    pub fn quark_doublet() -> Self {
        Self::new(
            "quark-doublet",
            vec![
                Slot::up(BundleKind::Dirac),
                Slot::up(BundleKind::Su2),
                Slot::up(BundleKind::Su3),
            ],
            1,
            Chirality::Chiral,
        )
    }

    /// Antichiral up-type quark singlet, weight +4.
    pub fn up_singlet() -> Self {
        Self::new(
            "up-singlet",
            vec![Slot::up(BundleKind::Dirac), Slot::up(BundleKind::Su3)],
            4,
            Chirality::Antichiral,
        )
    }

    /// Chiral up-type expansion coefficient, weight +4.
    pub fn up_chiral() -> Self {
        Self::new(
            "up-chiral",
            vec![Slot::up(BundleKind::Dirac), Slot::up(BundleKind::Su3)],
            4,
            Chirality::Chiral,
        )
    }

    /// Complete up-type quark wave function, weight +4.
    pub fn up_quark() -> Self {
        Self::new(
            "up-quark",
            vec![Slot::up(BundleKind::Dirac), Slot::up(BundleKind::Su3)],
            4,
            Chirality::None,
        )
    }

    /// Antichiral down-type quark singlet, weight -2.
    pub fn down_singlet() -> Self {
        Self::new(
            "down-singlet",
            vec![Slot::up(BundleKind::Dirac), Slot::up(BundleKind::Su3)],
            -2,
            Chirality::Antichiral,
        )
    }

    /// Chiral down-type expansion coefficient, weight -2.
    pub fn down_chiral() -> Self {
        Self::new(
            "down-chiral",
            vec![Slot::up(BundleKind::Dirac), Slot::up(BundleKind::Su3)],
            -2,
            Chirality::Chiral,
        )
    }

    /// Complete down-type quark wave function, weight -2.
    pub fn down_quark() -> Self {
        Self::new(
            "down-quark",
            vec![Slot::up(BundleKind::Dirac), Slot::up(BundleKind::Su3)],
            -2,
            Chirality::None,
        )
    }

    /// Check that a field carries exactly this species' signature.
    pub fn matches(&self, field: &IndexedField) -> Result<()> {
        if field.slots != self.slots || field.u1_weight != self.hypercharge_weight {
            return Err(Error::SpeciesMismatch {
                species: self.name.to_string(),
                detail: format!(
                    "expected slots {:?} weight {}, found {:?} weight {}",
                    self.slots, self.hypercharge_weight, field.slots, field.u1_weight
                ),
            });
        }
        Ok(())
    }
}

/// A complex multi-array over the grid with a fiber index signature.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedField {
    pub shape: GridShape,
    pub slots: Vec<Slot>,
    pub u1_weight: i32,
    strides: Vec<usize>,
    fiber_len: usize,
    pub data: Vec<Complex64>,
}

fn strides_of(slots: &[Slot]) -> (Vec<usize>, usize) {
    let mut strides = vec![0usize; slots.len()];
    let mut acc = 1usize;
    for (s, slot) in slots.iter().enumerate().rev() {
        strides[s] = acc;
        acc *= slot.kind.dim();
    }
    (strides, acc)
}

impl IndexedField {
    pub fn zeros(shape: GridShape, slots: Vec<Slot>, u1_weight: i32) -> Self {
        let (strides, fiber_len) = strides_of(&slots);
        Self {
            shape,
            slots,
            u1_weight,
            strides,
            fiber_len,
            data: vec![Complex64::new(0.0, 0.0); shape.len() * fiber_len],
        }
    }

    pub fn for_species(shape: GridShape, species: &Species) -> Self {
        Self::zeros(shape, species.slots.clone(), species.hypercharge_weight)
    }

    /// Sample a function of (coordinates, fiber multi-index).
    pub fn from_fn(
        shape: GridShape,
        slots: Vec<Slot>,
        u1_weight: i32,
        f: impl Fn([f64; 4], &[usize]) -> Complex64,
    ) -> Self {
        let mut out = Self::zeros(shape, slots, u1_weight);
        let flen = out.fiber_len;
        let dims: Vec<usize> = out.slots.iter().map(|s| s.kind.dim()).collect();
        let mut fidx_buf = vec![0usize; dims.len()];
        for idx in shape.iter() {
            let p = shape.flat(idx);
            let x = shape.coords(idx);
            for fidx in 0..flen {
                decode_into(fidx, &dims, &mut fidx_buf);
                out.data[p * flen + fidx] = f(x, &fidx_buf);
            }
        }
        out
    }

    pub fn fiber_len(&self) -> usize {
        self.fiber_len
    }

    pub fn fiber_dims(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.kind.dim()).collect()
    }

    #[inline]
    pub fn stride(&self, slot: usize) -> usize {
        self.strides[slot]
    }

    #[inline]
    pub fn encode(&self, fiber: &[usize]) -> usize {
        debug_assert_eq!(fiber.len(), self.slots.len());
        fiber.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    #[inline]
    pub fn get(&self, p: usize, fiber: &[usize]) -> Complex64 {
        self.data[p * self.fiber_len + self.encode(fiber)]
    }

    #[inline]
    pub fn set(&mut self, p: usize, fiber: &[usize], value: Complex64) {
        let f = self.encode(fiber);
        self.data[p * self.fiber_len + f] = value;
    }

    #[inline]
    pub fn get_flat(&self, p: usize, fidx: usize) -> Complex64 {
        self.data[p * self.fiber_len + fidx]
    }

    #[inline]
    pub fn set_flat(&mut self, p: usize, fidx: usize, value: Complex64) {
        self.data[p * self.fiber_len + fidx] = value;
    }

    /// View an Su2-doublet field (single Su2 slot) as 2-vectors.
    pub fn at2(&self, p: usize) -> Vector2<Complex64> {
        debug_assert_eq!(self.fiber_len, 2);
        Vector2::new(self.data[p * 2], self.data[p * 2 + 1])
    }

    pub fn set2(&mut self, p: usize, v: Vector2<Complex64>) {
        debug_assert_eq!(self.fiber_len, 2);
        self.data[p * 2] = v[0];
        self.data[p * 2 + 1] = v[1];
    }

    pub fn same_signature(&self, other: &Self) -> bool {
        self.shape == other.shape && self.slots == other.slots && self.u1_weight == other.u1_weight
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_signature(other), "signature mismatch in add");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.same_signature(other), "signature mismatch in sub");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Multiply pointwise by a complex scalar field.
    pub fn mul_scalar_field(&self, f: &crate::grid::ScalarField) -> Self {
        assert_eq!(self.shape, f.shape, "scalar field shape mismatch");
        let mut out = self.clone();
        for p in 0..self.shape.len() {
            let s = f.values[p];
            for fidx in 0..self.fiber_len {
                out.data[p * self.fiber_len + fidx] *= s;
            }
        }
        out
    }

    /// Componentwise complex conjugate. Flips every slot's variance and
    /// conjugation flag and negates the hypercharge weight.
    pub fn conj(&self) -> Self {
        let slots = self
            .slots
            .iter()
            .map(|s| Slot {
                kind: s.kind,
                variance: match s.variance {
                    Variance::Up => Variance::Down,
                    Variance::Down => Variance::Up,
                },
                conjugated: !s.conjugated,
            })
            .collect();
        let (strides, fiber_len) = strides_of(&self.slots);
        Self {
            shape: self.shape,
            slots,
            u1_weight: -self.u1_weight,
            strides,
            fiber_len,
            data: self.data.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Max modulus over interior grid points and all fiber components.
    pub fn max_norm_interior(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in self.shape.iter_interior() {
            let p = self.shape.flat(idx);
            for fidx in 0..self.fiber_len {
                worst = worst.max(self.data[p * self.fiber_len + fidx].norm());
            }
        }
        worst
    }

    /// Max modulus over all grid points and fiber components.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Apply a square matrix to one slot: out(..a..) = sum_b m(a,b) f(..b..).
    pub fn map_slot(&self, slot: usize, m: impl Fn(usize, usize) -> Complex64) -> Self {
        let dim = self.slots[slot].kind.dim();
        let stride = self.strides[slot];
        let mut out = Self::zeros(self.shape, self.slots.clone(), self.u1_weight);
        let flen = self.fiber_len;
        for p in 0..self.shape.len() {
            for base in 0..flen {
                // Visit each fiber index once, through its slot-0 residue.
                if !(base / stride).is_multiple_of(dim) {
                    continue;
                }
                for a in 0..dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..dim {
                        acc += m(a, b) * self.data[p * flen + base + b * stride];
                    }
                    out.data[p * flen + base + a * stride] = acc;
                }
            }
        }
        out
    }
}

#[inline]
fn decode_into(mut fidx: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in dims.iter().enumerate().rev() {
        out[slot] = fidx % d;
        fidx /= d;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape() -> GridShape {
        GridShape::new([5, 5, 5, 5], [0.1; 4], [0.0; 4])
    }

    #[test]
    fn encode_decode_round_trip() {
        let f = IndexedField::zeros(
            shape(),
            vec![Slot::up(BundleKind::Dirac), Slot::up(BundleKind::Su3)],
            4,
        );
        assert_eq!(f.fiber_len(), 12);
        let dims = f.fiber_dims();
        let mut buf = vec![0; 2];
        for fidx in 0..12 {
            decode_into(fidx, &dims, &mut buf);
            assert_eq!(f.encode(&buf), fidx);
        }
    }

    #[test]
    fn map_slot_applies_matrix_on_the_right_slot() {
        let mut f = IndexedField::zeros(
            shape(),
            vec![Slot::up(BundleKind::Dirac), Slot::up(BundleKind::Su2)],
            -3,
        );
        f.set(0, &[2, 1], Complex64::new(1.0, 0.0));
        // Swap the two isospin components.
        let swapped = f.map_slot(1, |a, b| {
            if a != b {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert_eq!(swapped.get(0, &[2, 0]), Complex64::new(1.0, 0.0));
        assert_eq!(swapped.get(0, &[2, 1]), Complex64::new(0.0, 0.0));
        // Act on the Dirac slot instead.
        let shifted = f.map_slot(0, |a, b| {
            if a == (b + 1) % 4 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert_eq!(shifted.get(0, &[3, 1]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn conj_flips_weight_and_variance() {
        let f = IndexedField::zeros(shape(), vec![Slot::up(BundleKind::Su2)], 3);
        let c = f.conj();
        assert_eq!(c.u1_weight, -3);
        assert_eq!(c.slots[0].variance, Variance::Down);
        assert!(c.slots[0].conjugated);
    }

    #[test]
    fn field_values_are_safe_to_share_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<IndexedField>();
        assert_send_sync::<Species>();
        assert_send_sync::<crate::grid::ScalarField>();
        assert_send_sync::<crate::manifold::Chart>();
        assert_send_sync::<crate::manifold::StructureConstants>();
        assert_send_sync::<crate::manifold::LeviCivita>();
        assert_send_sync::<crate::bundles::FiberForms>();
        assert_send_sync::<crate::bundles::GammaAlgebra>();
        assert_send_sync::<crate::connections::ConnectionSet>();
        assert_send_sync::<crate::connections::GaugePotentials>();
        assert_send_sync::<crate::breaking::VacuumFrame>();
        assert_send_sync::<crate::breaking::BosonFields>();
    }

    #[test]
    fn species_signature_check() {
        let f = IndexedField::for_species(shape(), &Species::higgs());
        assert!(Species::higgs().matches(&f).is_ok());
        assert!(Species::lepton_doublet().matches(&f).is_err());
    }
}
