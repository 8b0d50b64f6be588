//! Optical elements as linear maps on [`PhotonState`].
//!
//! Every element is stored in one of three shapes: an index permutation, a
//! diagonal, or a general sparse column map. All elements used by the schemes
//! have real matrix entries, but the storage is complex throughout.

use std::fmt;

use num_complex::Complex64;

use super::pattern::PixelPattern;
use super::state::{BasisLabel, Layout, PhotonState, Polarisation};
use crate::error::{IfmError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    /// Norm-preserving.
    Unitary,
    /// Contraction; the lost norm is absorption.
    Attenuator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Permutation,
    Diagonal,
    Block,
}

/// Forward or reversed action of sorters and converters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Where an object attenuator sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Scales every amplitude on pixel path `ℓ` by `√T_ℓ`, whatever its OAM.
    PixelPaths,
    /// Scales amplitudes with OAM `ℓ` on arm 0 by `√T_ℓ` (the whole encoder
    /// collapsed into one diagonal).
    OamDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorKind {
    /// Double reflection; OAM is preserved.
    Retro,
    /// Single reflection, `|ℓ⟩ → |−ℓ mod d⟩`.
    Plain,
}

#[derive(Debug, Clone, PartialEq)]
enum Action {
    /// Input basis index `i` is sent to output index `map[i]`.
    Permutation(Vec<usize>),
    Diagonal(Vec<Complex64>),
    /// Column `i` lists `(row, coefficient)` pairs.
    Sparse(Vec<Vec<(usize, Complex64)>>),
}

/// A linear map on the photon state space.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementOp {
    label: String,
    kind: OpKind,
    layout: Layout,
    action: Action,
}

impl ElementOp {
    fn new(label: impl Into<String>, kind: OpKind, layout: Layout, action: Action) -> Self {
        Self {
            label: label.into(),
            kind,
            layout,
            action,
        }
    }

    /// Builds a permutation from a basis relabelling. The map must be a bijection.
    fn relabel(
        label: impl Into<String>,
        layout: Layout,
        f: impl Fn(BasisLabel) -> BasisLabel,
    ) -> Self {
        let map: Vec<usize> = layout
            .labels()
            .map(|b| {
                let t = f(b);
                layout.index(t.pol, t.oam, t.mode)
            })
            .collect();
        debug_assert!({
            let mut seen = vec![false; map.len()];
            map.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
        });
        Self::new(label, OpKind::Unitary, layout, Action::Permutation(map))
    }

    /// Builds a sparse operator from a per-basis-vector image.
    fn from_columns(
        label: impl Into<String>,
        kind: OpKind,
        layout: Layout,
        f: impl Fn(BasisLabel) -> Vec<(BasisLabel, f64)>,
    ) -> Self {
        let cols = layout
            .labels()
            .map(|b| {
                f(b).into_iter()
                    .filter(|&(_, c)| c != 0.0)
                    .map(|(t, c)| (layout.index(t.pol, t.oam, t.mode), Complex64::new(c, 0.0)))
                    .collect()
            })
            .collect();
        Self::new(label, kind, layout, Action::Sparse(cols))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn structure(&self) -> Structure {
        match self.action {
            Action::Permutation(_) => Structure::Permutation,
            Action::Diagonal(_) => Structure::Diagonal,
            Action::Sparse(_) => Structure::Block,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn apply(&self, state: &PhotonState) -> Result<PhotonState> {
        if state.layout() != self.layout {
            return Err(IfmError::DimensionMismatch {
                op: self.dim(),
                state: state.dim(),
            });
        }
        let input = state.amplitudes();
        let mut out = vec![ZERO; input.len()];
        match &self.action {
            Action::Permutation(map) => {
                for (a, &j) in input.iter().zip(map) {
                    out[j] = *a;
                }
            }
            Action::Diagonal(diag) => {
                for ((o, a), w) in out.iter_mut().zip(input).zip(diag) {
                    *o = a * w;
                }
            }
            Action::Sparse(cols) => {
                for (a, col) in input.iter().zip(cols) {
                    if *a == ZERO {
                        continue;
                    }
                    for &(r, c) in col {
                        out[r] += c * a;
                    }
                }
            }
        }
        Ok(PhotonState::from_raw(self.layout, out))
    }

    /// Column `col` as `(row, value)` pairs.
    fn column(&self, col: usize) -> Vec<(usize, Complex64)> {
        match &self.action {
            Action::Permutation(map) => vec![(map[col], ONE)],
            Action::Diagonal(diag) => vec![(col, diag[col])],
            Action::Sparse(cols) => cols[col].clone(),
        }
    }

    /// Matrix element `⟨row|op|col⟩`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.column(col)
            .into_iter()
            .filter(|&(r, _)| r == row)
            .map(|(_, c)| c)
            .sum()
    }

    /// Dense row-major matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.layout.len();
        let mut m = vec![vec![ZERO; n]; n];
        for col in 0..n {
            for (r, c) in self.column(col) {
                m[r][col] += c;
            }
        }
        m
    }

    /// Conjugate transpose. For unitary elements this is the inverse.
    pub fn adjoint(&self) -> ElementOp {
        let label = format!("{}†", self.label);
        let action = match &self.action {
            Action::Permutation(map) => {
                let mut inv = vec![0; map.len()];
                for (i, &j) in map.iter().enumerate() {
                    inv[j] = i;
                }
                Action::Permutation(inv)
            }
            Action::Diagonal(diag) => Action::Diagonal(diag.iter().map(|c| c.conj()).collect()),
            Action::Sparse(cols) => {
                let mut out = vec![Vec::new(); cols.len()];
                for (i, col) in cols.iter().enumerate() {
                    for &(r, c) in col {
                        out[r].push((i, c.conj()));
                    }
                }
                Action::Sparse(out)
            }
        };
        ElementOp::new(label, self.kind, self.layout, action)
    }

    /// `next ∘ self`: applies `self` first, then `next`.
    pub fn then(&self, next: &ElementOp) -> Result<ElementOp> {
        if self.layout != next.layout {
            return Err(IfmError::DimensionMismatch {
                op: self.dim(),
                state: next.dim(),
            });
        }
        let kind = if self.kind == OpKind::Unitary && next.kind == OpKind::Unitary {
            OpKind::Unitary
        } else {
            OpKind::Attenuator
        };
        let label = format!("{}·{}", next.label, self.label);
        let action = match (&self.action, &next.action) {
            (Action::Permutation(a), Action::Permutation(b)) => {
                Action::Permutation(a.iter().map(|&j| b[j]).collect())
            }
            (Action::Diagonal(a), Action::Diagonal(b)) => {
                Action::Diagonal(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            _ => {
                let n = self.layout.len();
                let cols = (0..n)
                    .map(|i| {
                        let mut acc = vec![ZERO; n];
                        for (k, c) in self.column(i) {
                            for (r, d) in next.column(k) {
                                acc[r] += d * c;
                            }
                        }
                        acc.into_iter()
                            .enumerate()
                            .filter(|(_, c)| *c != ZERO)
                            .collect()
                    })
                    .collect();
                Action::Sparse(cols)
            }
        };
        Ok(ElementOp::new(label, kind, self.layout, action))
    }
}

impl fmt::Display for ElementOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// 50/50 beam splitter between mode 0 and the reference mode `d`, as a
/// Hadamard on those two modes. Modes `1..d` pass through.
pub fn beam_splitter(dim: usize) -> Result<ElementOp> {
    let layout = Layout::new(dim)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let reference = layout.reference_mode();
    Ok(ElementOp::from_columns(
        "BS",
        OpKind::Unitary,
        layout,
        |b| {
            let at = |mode| BasisLabel { mode, ..b };
            if b.mode == 0 {
                vec![(at(0), r), (at(reference), r)]
            } else if b.mode == reference {
                vec![(at(0), r), (at(reference), -r)]
            } else {
                vec![(b, 1.0)]
            }
        },
    ))
}

/// Polarising beam splitter: V light is exchanged between mode 0 and the
/// reference mode; H light is untouched. The same element splits and merges.
pub fn polarising_beam_splitter(dim: usize) -> Result<ElementOp> {
    let layout = Layout::new(dim)?;
    let reference = layout.reference_mode();
    Ok(ElementOp::relabel("PBS", layout, |b| {
        match (b.pol, b.mode) {
            (Polarisation::V, 0) => BasisLabel {
                mode: reference,
                ..b
            },
            (Polarisation::V, m) if m == reference => BasisLabel { mode: 0, ..b },
            _ => b,
        }
    }))
}

/// Rotates polarisation by `theta` on every OAM value and mode:
/// `|H⟩ → cos θ|H⟩ + sin θ|V⟩`, `|V⟩ → −sin θ|H⟩ + cos θ|V⟩`.
pub fn polarisation_rotator(dim: usize, theta: f64) -> Result<ElementOp> {
    if !theta.is_finite() {
        return Err(IfmError::InvalidAngle(theta));
    }
    let (s, c) = theta.sin_cos();
    polarisation_map(dim, [[c, -s], [s, c]], format!("R({theta})"))
}

/// Real 2×2 map on the polarisation qubit, identity elsewhere. `m[row][col]`
/// with H = 0, V = 1. Tagged unitary without checking, so a faulty matrix
/// can stand in for a rotator.
pub fn polarisation_map(
    dim: usize,
    m: [[f64; 2]; 2],
    label: impl Into<String>,
) -> Result<ElementOp> {
    let layout = Layout::new(dim)?;
    Ok(ElementOp::from_columns(
        label,
        OpKind::Unitary,
        layout,
        |b| {
            let col = b.pol.index();
            Polarisation::ALL
                .iter()
                .map(|&pol| (BasisLabel { pol, ..b }, m[pol.index()][col]))
                .collect()
        },
    ))
}

/// OAM sorter. Forward is the controlled shift `C(X_d)` with OAM as control
/// and the pixel-path register (modes `0..d`) as target, so `|ℓ⟩|0_m⟩ → |ℓ⟩|ℓ_m⟩`.
/// The reference mode is untouched.
pub fn oam_sorter(dim: usize, direction: Direction) -> Result<ElementOp> {
    let layout = Layout::new(dim)?;
    let label = match direction {
        Direction::Forward => "S",
        Direction::Inverse => "S⁻¹",
    };
    Ok(ElementOp::relabel(label, layout, |b| {
        if b.mode == dim {
            return b;
        }
        let mode = match direction {
            Direction::Forward => (b.mode + b.oam) % dim,
            Direction::Inverse => (b.mode + dim - b.oam) % dim,
        };
        BasisLabel { mode, ..b }
    }))
}

/// OAM converter. Forward is `C(X_d†)` with the pixel path as control and OAM
/// as target: on path `m` the OAM is lowered by `m`, so `|ℓ⟩|ℓ_m⟩ → |0⟩|ℓ_m⟩`.
pub fn oam_converter(dim: usize, direction: Direction) -> Result<ElementOp> {
    let layout = Layout::new(dim)?;
    let label = match direction {
        Direction::Forward => "c",
        Direction::Inverse => "c⁻¹",
    };
    Ok(ElementOp::relabel(label, layout, |b| {
        if b.mode == dim {
            return b;
        }
        let oam = match direction {
            Direction::Forward => (b.oam + dim - b.mode) % dim,
            Direction::Inverse => (b.oam + b.mode) % dim,
        };
        BasisLabel { oam, ..b }
    }))
}

/// The object as an amplitude attenuator, `√T_ℓ` per pixel.
pub fn object_attenuator(pattern: &PixelPattern, placement: Placement) -> Result<ElementOp> {
    // re-validate: patterns built through serde or by hand go through the same gate
    let pattern = PixelPattern::from_transmissions(pattern.transmissions().to_vec())?;
    let dim = pattern.dim();
    let layout = Layout::new(dim)?;
    let amp: Vec<f64> = pattern.transmissions().iter().map(|t| t.sqrt()).collect();
    let diag = layout
        .labels()
        .map(|b| {
            let w = match placement {
                Placement::PixelPaths if b.mode < dim => amp[b.mode],
                Placement::OamDiagonal if b.mode == 0 => amp[b.oam],
                _ => 1.0,
            };
            Complex64::new(w, 0.0)
        })
        .collect();
    let label = match placement {
        Placement::PixelPaths => "object",
        Placement::OamDiagonal => "T_OAM",
    };
    Ok(ElementOp::new(
        label,
        OpKind::Attenuator,
        layout,
        Action::Diagonal(diag),
    ))
}

/// Switched-on Pockels cells in both arms: `H ↔ V` everywhere.
pub fn pockels_flip(dim: usize) -> Result<ElementOp> {
    let layout = Layout::new(dim)?;
    Ok(ElementOp::relabel("P", layout, |b| BasisLabel {
        pol: b.pol.flipped(),
        ..b
    }))
}

/// Mirror on the object side. A plain mirror flips `ℓ → (d − ℓ) mod d` on the
/// pixel paths `0..d`; a retro-reflector is the identity. The reference arm
/// always carries a retro-reflector, so mode `d` is never flipped.
pub fn mirror_reflect(kind: MirrorKind, dim: usize) -> Result<ElementOp> {
    let layout = Layout::new(dim)?;
    let op = match kind {
        MirrorKind::Retro => ElementOp::relabel("RR", layout, |b| b),
        MirrorKind::Plain => ElementOp::relabel("M", layout, |b| {
            if b.mode == dim {
                b
            } else {
                BasisLabel {
                    oam: (dim - b.oam) % dim,
                    ..b
                }
            }
        }),
    };
    Ok(op)
}

/// Identity on the space of OAM dimension `dim`.
pub fn identity(dim: usize) -> Result<ElementOp> {
    let layout = Layout::new(dim)?;
    Ok(ElementOp::relabel("I", layout, |b| b))
}
