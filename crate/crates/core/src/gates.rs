//! Qutrit gate set: Gell-Mann rotations, level permutations and phases, the
//! native `iSWAP^02` / `iSWAP^20` interactions, `CZ`, and the composite
//! controlled-collapse gate `U` used by the folding construction.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian, Matrix, C64, I, ONE, ZERO};

/// Which native interaction carries a two-qutrit gate.
///
/// `Iswap02` exchanges `|11>` with `|02>` (the second qutrit is excited to
/// `|2>`), `Iswap20` exchanges `|11>` with `|20>` (the first qutrit is).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Core {
    Iswap02,
    Iswap20,
}

impl Core {
    pub fn suffix(self) -> &'static str {
        match self {
            Core::Iswap02 => "02",
            Core::Iswap20 => "20",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rotation {
    R01x,
    R01y,
    R12x,
    R12y,
    R02x,
    R02y,
}

impl Rotation {
    pub const ALL: [Rotation; 6] = [
        Rotation::R01x,
        Rotation::R01y,
        Rotation::R12x,
        Rotation::R12y,
        Rotation::R02x,
        Rotation::R02y,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rotation::R01x => "r01x",
            Rotation::R01y => "r01y",
            Rotation::R12x => "r12x",
            Rotation::R12y => "r12y",
            Rotation::R02x => "r02x",
            Rotation::R02y => "r02y",
        }
    }
}

/// A gate of the qutrit instruction set together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rot(Rotation, f64),
    X01,
    X12,
    X02,
    /// `diag(e^{i t0}, e^{i t1}, e^{i t2})`.
    Ph([f64; 3]),
    Iswap(Core, f64),
    Cz,
    U(Core),
    Udg(Core),
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::Rot(..) | Gate::X01 | Gate::X12 | Gate::X02 | Gate::Ph(_) => 1,
            Gate::Iswap(..) | Gate::Cz | Gate::U(_) | Gate::Udg(_) => 2,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Gate::Rot(r, _) => r.name().to_string(),
            Gate::X01 => "x01".into(),
            Gate::X12 => "x12".into(),
            Gate::X02 => "x02".into(),
            Gate::Ph(_) => "ph".into(),
            Gate::Iswap(c, _) => format!("iswap{}", c.suffix()),
            Gate::Cz => "cz".into(),
            Gate::U(c) => format!("u{}", c.suffix()),
            Gate::Udg(c) => format!("u{}dg", c.suffix()),
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::Rot(_, phi) | Gate::Iswap(_, phi) => vec![phi],
            Gate::Ph(p) => p.to_vec(),
            _ => Vec::new(),
        }
    }

    /// Parses the serialized `(name, params)` form.
    pub fn from_parts(name: &str, params: &[f64]) -> Result<Gate> {
        let malformed = |reason: String| Error::MalformedGate {
            name: name.to_string(),
            reason,
        };
        let expect = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(malformed(format!("expected {k} params, got {}", params.len())))
            }
        };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(malformed("non-finite parameter".into()));
        }
        if let Some(r) = Rotation::ALL.iter().find(|r| r.name() == name) {
            expect(1)?;
            return Ok(Gate::Rot(*r, params[0]));
        }
        let gate = match name {
            "x01" => Gate::X01,
            "x12" => Gate::X12,
            "x02" => Gate::X02,
            "ph" => {
                expect(3)?;
                return Ok(Gate::Ph([params[0], params[1], params[2]]));
            }
            "iswap02" | "iswap20" => {
                expect(1)?;
                let core = if name == "iswap02" {
                    Core::Iswap02
                } else {
                    Core::Iswap20
                };
                return Ok(Gate::Iswap(core, params[0]));
            }
            "cz" => Gate::Cz,
            "u02" => Gate::U(Core::Iswap02),
            "u20" => Gate::U(Core::Iswap20),
            "u02dg" => Gate::Udg(Core::Iswap02),
            "u20dg" => Gate::Udg(Core::Iswap20),
            _ => return Err(malformed("unknown gate".into())),
        };
        expect(0)?;
        Ok(gate)
    }

    /// The gate implementing the inverse of `self`.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Rot(r, phi) => Gate::Rot(r, -phi),
            Gate::Ph([a, b, c]) => Gate::Ph([-a, -b, -c]),
            // (-i e^{-i t})^* = -i e^{-i(-t - pi)}
            Gate::Iswap(c, theta) => Gate::Iswap(c, -theta - std::f64::consts::PI),
            Gate::U(c) => Gate::Udg(c),
            Gate::Udg(c) => Gate::U(c),
            g @ (Gate::X01 | Gate::X12 | Gate::X02 | Gate::Cz) => g,
        }
    }

    pub fn is_two_qutrit(&self) -> bool {
        self.arity() == 2
    }

    /// True for the gates counted as one iSWAP-cored interaction.
    pub fn is_iswap_cored(&self) -> bool {
        matches!(self, Gate::Iswap(..) | Gate::U(_) | Gate::Udg(_))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            write!(f, "{}", self.name())
        } else {
            let ps: Vec<String> = params.iter().map(|p| format!("{p}")).collect();
            write!(f, "{}({})", self.name(), ps.join(","))
        }
    }
}

/// Gell-Mann generator `lambda_index`; only the ones driving the `0-1` and
/// `1-2` transitions (1, 2, 6, 7) are available.
pub fn gell_mann(index: u8) -> Result<Matrix> {
    let z = ZERO;
    let m = match index {
        1 => Matrix::from_rows(&[&[z, ONE, z], &[ONE, z, z], &[z, z, z]]),
        2 => Matrix::from_rows(&[&[z, -I, z], &[I, z, z], &[z, z, z]]),
        6 => Matrix::from_rows(&[&[z, z, z], &[z, z, ONE], &[z, ONE, z]]),
        7 => Matrix::from_rows(&[&[z, z, z], &[z, z, -I], &[z, I, z]]),
        _ => {
            return Err(Error::invalid(
                "gell_mann",
                format!("index {index} is not one of 1, 2, 6, 7"),
            ))
        }
    };
    Ok(m)
}

fn exp_gm(index: u8, t: f64) -> Matrix {
    expm_hermitian(&gell_mann(index).expect("valid index"), t).expect("Gell-Mann matrices are Hermitian")
}

/// Single-qutrit rotation.
///
/// `R01x(phi) = exp(-i lambda1 phi)`, `R01y` uses `lambda2`, `R12x`/`R12y`
/// use `lambda6`/`lambda7`. The `0-2` rotations are synthesized through the
/// `1-2` transition:
/// `R02(phi) = exp(-i pi/2 lambda6) exp(-i phi/2 lambda_{1|2}) exp(i pi/2 lambda6)`.
pub fn rotation(kind: Rotation, phi: f64) -> Matrix {
    match kind {
        Rotation::R01x => exp_gm(1, phi),
        Rotation::R01y => exp_gm(2, phi),
        Rotation::R12x => exp_gm(6, phi),
        Rotation::R12y => exp_gm(7, phi),
        Rotation::R02x | Rotation::R02y => {
            let inner = if kind == Rotation::R02x { 1 } else { 2 };
            let outer = exp_gm(6, FRAC_PI_2);
            let undo = exp_gm(6, -FRAC_PI_2);
            &(&outer * &exp_gm(inner, phi / 2.0)) * &undo
        }
    }
}

fn level_swap(a: usize, b: usize) -> Matrix {
    let mut perm = [0, 1, 2];
    perm.swap(a, b);
    Matrix::monomial(&perm, &[ONE; 3])
}

pub fn x01() -> Matrix {
    level_swap(0, 1)
}

pub fn x12() -> Matrix {
    level_swap(1, 2)
}

pub fn x02() -> Matrix {
    level_swap(0, 2)
}

pub fn phase(thetas: [f64; 3]) -> Matrix {
    Matrix::diagonal(&thetas.map(|t| C64::from_polar(1.0, t)))
}

/// Native `iSWAP^02(theta)` / `iSWAP^20(theta)`: the swapped pair picks up
/// `-i e^{-i theta}`, every other two-qutrit basis state is left alone.
pub fn iswap(core: Core, theta: f64) -> Matrix {
    // |11> = 4, |02> = 2, |20> = 6
    let partner = match core {
        Core::Iswap02 => 2,
        Core::Iswap20 => 6,
    };
    let mut perm: Vec<usize> = (0..9).collect();
    perm.swap(4, partner);
    let mut phases = vec![ONE; 9];
    let swapped = -I * C64::from_polar(1.0, -theta);
    phases[4] = swapped;
    phases[partner] = swapped;
    Matrix::monomial(&perm, &phases)
}

/// Controlled-phase on the qubit levels: `-1` on `|11>`, identity elsewhere
/// (including every state with a `|2>` digit).
pub fn cz() -> Matrix {
    let mut diag = vec![ONE; 9];
    diag[4] = -ONE;
    Matrix::diagonal(&diag)
}

/// The collapse gate `U_{i->j}` acting on `(i, j)`.
///
/// On qubit inputs it maps `|00> -> |01>`, `|01> -> |00>`,
/// `|10> -> -i|02>`, `|11> -> |10>`: qutrit `i` ends in `|1>` iff both inputs
/// were `|1>`, and the failed case parks the excitation on `j` at level `|2>`.
///
/// Both cores yield this same matrix. The `02` core is `iSWAP^02(0)` after
/// `X01` on `j`. The `20` core runs `iSWAP^20(0)` between `X02 (x) X02`
/// conjugations, so `i` is the qutrit driven into `|2>` inside the native
/// interaction while the logical action is unchanged.
pub fn u_gate(core: Core) -> Matrix {
    let flip_child = Matrix::identity(3).kron(&x01());
    match core {
        Core::Iswap02 => &iswap(Core::Iswap02, 0.0) * &flip_child,
        Core::Iswap20 => {
            let conj = x02().kron(&x02());
            let native = &(&conj * &iswap(Core::Iswap20, 0.0)) * &conj;
            &native * &flip_child
        }
    }
}

/// Rewrites `iSWAP^02(theta)` as `iSWAP^20(theta)` and back, by
/// conjugating with the `0 <-> 2` level swap on both qutrits. Applying it
/// twice returns the input.
pub fn convert_iswap_variant(m: &Matrix) -> Result<Matrix> {
    if m.dim() != 9 {
        return Err(Error::NotIswap);
    }
    // <02|M|11> or <20|M|11> is -i e^{-i theta}
    let is_variant = |core: Core, row: usize| {
        let z = m.get(row, 4) * I;
        (z.norm() - 1.0).abs() < 1e-9 && m.max_abs_diff(&iswap(core, -z.arg())) < 1e-9
    };
    if !is_variant(Core::Iswap02, 2) && !is_variant(Core::Iswap20, 6) {
        return Err(Error::NotIswap);
    }
    let conj = x02().kron(&x02());
    Ok(&(&conj * m) * &conj)
}

/// Matrix of any gate in the instruction set.
pub fn matrix_of(gate: &Gate) -> Matrix {
    match *gate {
        Gate::Rot(kind, phi) => rotation(kind, phi),
        Gate::X01 => x01(),
        Gate::X12 => x12(),
        Gate::X02 => x02(),
        Gate::Ph(t) => phase(t),
        Gate::Iswap(core, theta) => iswap(core, theta),
        Gate::Cz => cz(),
        Gate::U(core) => u_gate(core),
        Gate::Udg(core) => u_gate(core).dagger(),
    }
}
