//! OpenQASM 2.0 output for `M(θ, φ, λ)` circuits.
//!
//! `M` is defined once as a `gate` built from four CX and three `U` gates;
//! each circuit gate becomes one `m(θ,φ,λ)` application with 17-digit
//! angle literals.
//!
//! Wire order: the gate body is written on wires `(a, b)` with `a` the left
//! tensor factor. A circuit gate on `(q, q+1)` is applied as
//! `m(...) q[q+1],q[q];` so that node/qubit `j` stays `q[j]`.

use std::fmt::Write as _;

use crate::backends::statevector::circuit_unitary;
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::matchgate::{single_qubit_u, GateKind, MatchgateCircuit, MatchgateParams};
use crate::numerics::{matrices_equal_up_to_global_phase, ComplexMatrix, Mat2, C64, ONE, ZERO};

/// Largest width accepted by [`verify_emission`].
pub const MAX_VERIFY_QUBITS: usize = 10;

/// Tolerance used by [`verify_emission`].
pub const VERIFY_TOL: f64 = 1e-9;

const GATE_DEFINITION: &str = "\
gate m(theta,phi,lambda) a,b
{
  cx a,b;
  U(0,0,(lambda-phi)/2) a;
  cx b,a;
  U(-theta/2,0,-(phi+lambda)/2) a;
  cx b,a;
  U(theta/2,phi,0) a;
  cx a,b;
}
";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wire {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Primitive {
    Cx { control: Wire, target: Wire },
    U { wire: Wire, theta: f64, phi: f64, lambda: f64 },
}

/// The seven-gate body of `m(θ, φ, λ) a,b` with angles substituted.
pub fn decompose_m(p: &MatchgateParams) -> [Primitive; 7] {
    use Primitive::{Cx, U};
    use Wire::{A, B};
    let MatchgateParams { theta, phi, lambda } = *p;
    [
        Cx { control: A, target: B },
        U { wire: A, theta: 0.0, phi: 0.0, lambda: (lambda - phi) / 2.0 },
        Cx { control: B, target: A },
        U { wire: A, theta: -theta / 2.0, phi: 0.0, lambda: -(phi + lambda) / 2.0 },
        Cx { control: B, target: A },
        U { wire: A, theta: theta / 2.0, phi, lambda: 0.0 },
        Cx { control: A, target: B },
    ]
}

/// Bit of a wire in the two-qubit index `2·a + b`.
fn wire_bit(w: Wire) -> usize {
    match w {
        Wire::A => 2,
        Wire::B => 1,
    }
}

/// 4x4 product of a primitive sequence in the basis `|a b⟩`.
pub fn compose(gates: &[Primitive]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(4);
    for g in gates {
        let mut next = ComplexMatrix::zeros(4, 4);
        for col in 0..4 {
            let column: Vec<C64> = (0..4).map(|r| m[(r, col)]).collect();
            let out = apply_primitive(&column, g, wire_bit);
            for (r, x) in out.into_iter().enumerate() {
                next[(r, col)] = x;
            }
        }
        m = next;
    }
    m
}

fn apply_primitive(v: &[C64], g: &Primitive, bit_of: impl Fn(Wire) -> usize) -> Vec<C64> {
    match *g {
        Primitive::Cx { control, target } => {
            let (c, t) = (bit_of(control), bit_of(target));
            (0..v.len())
                .map(|i| if i & c != 0 { v[i ^ t] } else { v[i] })
                .collect()
        }
        Primitive::U { wire, theta, phi, lambda } => {
            let u = single_qubit_u(theta, phi, lambda);
            let bit = bit_of(wire);
            let mut out = v.to_vec();
            apply_single(&mut out, bit, &u);
            out
        }
    }
}

fn apply_single(v: &mut [C64], bit: usize, u: &Mat2) {
    for i in 0..v.len() {
        if i & bit == 0 {
            let (x0, x1) = u.apply(v[i], v[i | bit]);
            v[i] = x0;
            v[i | bit] = x1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct EmitOptions {
    pub measure: bool,
    pub register_name: String,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            measure: false,
            register_name: "q".to_string(),
        }
    }
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Emits the circuit as OpenQASM 2.0 text. Only `M(θ, φ, λ)` gates are
/// accepted.
pub fn emit_qasm(circuit: &MatchgateCircuit, options: &EmitOptions) -> Result<String> {
    let q = options.register_name.as_str();
    if !valid_identifier(q) || q == "c" {
        return Err(Error::Invalid(format!("`{q}` is not a usable register name")));
    }
    let d = circuit.width();
    let mut lines = String::new();
    for (gate_index, gate) in circuit.gates().iter().enumerate() {
        let p = match gate.kind {
            GateKind::Param(p) => p,
            GateKind::General(_) => return Err(Error::UnsupportedGate { gate_index }),
        };
        writeln!(
            lines,
            "m({},{},{}) {q}[{}],{q}[{}];",
            sig17(p.theta),
            sig17(p.phi),
            sig17(p.lambda),
            gate.q + 1,
            gate.q
        )
        .expect("writing to a String");
    }

    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str(
        "// U(theta,phi,lambda) in the gate body is the unit-determinant rotation, equal to \
         u3(theta,phi,lambda) times the global phase exp(-i(phi+lambda)/2).\n",
    );
    out.push_str(&format!(
        "// Node j is {q}[j]. m(...) x,y acts on the pair with x the left factor, so a gate on \
         nodes (j,j+1) is written {q}[j+1],{q}[j].\n"
    ));
    if options.measure {
        out.push_str(&format!(
            "// {q}[j] is measured into c[j]; in the usual printed bit string c[0] is the rightmost bit.\n"
        ));
    }
    out.push_str(GATE_DEFINITION);
    out.push_str(&format!("qreg {q}[{d}];\n"));
    if options.measure {
        out.push_str(&format!("creg c[{d}];\n"));
    }
    out.push_str(&lines);
    if options.measure {
        for j in 0..d {
            out.push_str(&format!("measure {q}[{j}] -> c[{j}];\n"));
        }
    }
    Ok(out)
}

/// One parsed `m(...)` application.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParsedApplication {
    pub params: MatchgateParams,
    pub first: usize,
    pub second: usize,
}

fn parse_index(operand: &str) -> Result<usize> {
    let operand = operand.trim();
    let open = operand
        .find('[')
        .ok_or_else(|| Error::Invalid(format!("bad qubit operand `{operand}`")))?;
    let close = operand
        .rfind(']')
        .ok_or_else(|| Error::Invalid(format!("bad qubit operand `{operand}`")))?;
    operand[open + 1..close]
        .parse()
        .map_err(|_| Error::Invalid(format!("bad qubit operand `{operand}`")))
}

/// Extracts every `m(θ,φ,λ) x,y;` line.
pub fn parse_applications(text: &str) -> Result<Vec<ParsedApplication>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        let Some(rest) = line.strip_prefix("m(") else {
            continue;
        };
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Invalid(format!("unterminated application `{line}`")))?;
        let angles: Vec<f64> = rest[..close]
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Invalid(format!("bad angle list in `{line}`")))?;
        if angles.len() != 3 {
            return Err(Error::Invalid(format!("expected three angles in `{line}`")));
        }
        let operands = rest[close + 1..].trim().trim_end_matches(';');
        let (x, y) = operands
            .split_once(',')
            .ok_or_else(|| Error::Invalid(format!("expected two operands in `{line}`")))?;
        out.push(ParsedApplication {
            params: MatchgateParams::new(angles[0], angles[1], angles[2]),
            first: parse_index(x)?,
            second: parse_index(y)?,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmissionReport {
    pub pass: bool,
    pub max_deviation: f64,
    /// `φ` with emitted ≈ `φ · reference`.
    pub phase: Option<C64>,
    pub applications: usize,
}

/// Composes the emitted CX/U stream of `text` on `d` qubits.
pub fn emitted_unitary(text: &str, d: usize) -> Result<ComplexMatrix> {
    if d > MAX_VERIFY_QUBITS {
        return Err(Error::Scale {
            requested: d,
            limit: MAX_VERIFY_QUBITS,
        });
    }
    let mut stream = Vec::new();
    for app in parse_applications(text)? {
        if app.first >= d || app.second >= d || app.first == app.second {
            return Err(Error::Index(format!(
                "application on ({}, {}) in a {d}-qubit register",
                app.first, app.second
            )));
        }
        let wires = (1usize << (d - 1 - app.first), 1usize << (d - 1 - app.second));
        stream.extend(decompose_m(&app.params).map(|p| (p, wires)));
    }
    let dim = 1usize << d;
    let mut u = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut v = vec![ZERO; dim];
        v[col] = ONE;
        for (p, (a, b)) in &stream {
            v = apply_primitive(&v, p, |w| if w == Wire::A { *a } else { *b });
        }
        for (row, x) in v.into_iter().enumerate() {
            u[(row, col)] = x;
        }
    }
    Ok(u)
}

/// Checks that `text` implements `circuit` up to a global phase.
pub fn verify_qasm(text: &str, circuit: &MatchgateCircuit) -> Result<EmissionReport> {
    let d = circuit.width();
    let emitted = emitted_unitary(text, d)?;
    let reference = circuit_unitary(circuit)?;
    let m = matrices_equal_up_to_global_phase(&emitted, &reference, VERIFY_TOL)?;
    Ok(EmissionReport {
        pass: m.equal,
        max_deviation: m.deviation,
        phase: m.phase,
        applications: parse_applications(text)?.len(),
    })
}

/// Emits `circuit` and verifies the emitted stream against it.
pub fn verify_emission(circuit: &MatchgateCircuit) -> Result<EmissionReport> {
    let text = emit_qasm(circuit, &EmitOptions::default())?;
    verify_qasm(&text, circuit)
}
