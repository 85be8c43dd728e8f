//! Named fixtures: the two diagrams, powerset Boolean algebras, and finite
//! truncations of the algebra F.

use thiserror::Error;

use crate::algebra::FiniteAlgebra;
use crate::format::{emit_algebra, emit_pfun, NamedFunctions, PfunFile};
use crate::ninfty;
use crate::pfun::{close_generators, ConcreteAlgebra, Op, PartialFunction, PfunError, Signature};

/// Largest `n` accepted for `boolean-n`.
pub const MAX_BOOLEAN_ATOMS: u32 = 6;
/// Largest `n` accepted for `example43-truncation-n`.
pub const MAX_TRUNCATION: u32 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown fixture {0:?} (expected figure1, figure2, boolean-N or example43-truncation-N)")]
    UnknownFixture(String),
    #[error(transparent)]
    Pfun(#[from] PfunError),
}

/// A fixture rendered as files: `(file name, contents)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub files: Vec<(String, String)>,
}

pub const FIXTURE_NAMES: [&str; 4] = ["figure1", "figure2", "boolean-N", "example43-truncation-N"];

fn named(base: &[&str], functions: &[(&str, &[(usize, usize)])]) -> NamedFunctions {
    let n = base.len();
    NamedFunctions {
        base: base.iter().map(|s| s.to_string()).collect(),
        names: functions.iter().map(|(name, _)| name.to_string()).collect(),
        functions: functions
            .iter()
            .map(|(_, pairs)| PartialFunction::from_pairs(n, pairs.iter().copied()).expect("fixture"))
            .collect(),
    }
}

/// The four functions of the right-distributivity counterexample on points
/// `a, b, c, d`: `f1: a ↦ b`, `f2: a ↦ c`, `g: b, c ↦ d`, `h: a ↦ d`.
pub fn figure1() -> NamedFunctions {
    named(
        &["a", "b", "c", "d"],
        &[
            ("f1", &[(0, 1)]),
            ("f2", &[(0, 2)]),
            ("g", &[(1, 3), (2, 3)]),
            ("h", &[(0, 3)]),
        ],
    )
}

/// The range counterexample on points `a, b, c`: `f: a ↦ c`, `g: b ↦ c`.
pub fn figure2() -> NamedFunctions {
    named(&["a", "b", "c"], &[("f", &[(0, 2)]), ("g", &[(1, 2)])])
}

/// Closes `generators` under `signature` and names the result readably:
/// generators keep their names, the empty function is `0`, restrictions of
/// the identity are `id{…}`, and anything else is `t<i>` by position.
pub fn close_named(
    generators: &NamedFunctions,
    signature: &Signature,
) -> Result<ConcreteAlgebra, PfunError> {
    let closed = close_generators(
        generators.base.clone(),
        &generators.functions,
        signature,
        crate::pfun::DEFAULT_CLOSURE_CAP,
    )?;
    let names = closed
        .functions()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if let Some(j) = generators.functions.iter().position(|g| g == f) {
                generators.names[j].clone()
            } else if f.is_empty() {
                "0".to_string()
            } else if f.pairs().all(|(x, y)| x == y) {
                let points: Vec<&str> = f.pairs().map(|(x, _)| generators.base[x].as_str()).collect();
                format!("id{{{}}}", points.join(","))
            } else {
                format!("t{i}")
            }
        })
        .collect();
    ConcreteAlgebra::from_functions(
        closed.base().to_vec(),
        names,
        closed.functions().to_vec(),
        signature.clone(),
    )
}

pub fn figure1_closure() -> ConcreteAlgebra {
    close_named(&figure1(), &Signature::standard()).expect("small closure")
}

/// The closure of the range counterexample, with range in the signature.
pub fn figure2_closure_with_range() -> ConcreteAlgebra {
    let sig = Signature::new([Op::Compose, Op::Meet, Op::Antidomain, Op::Range]);
    close_named(&figure2(), &sig).expect("small closure")
}

pub fn figure2_closure() -> ConcreteAlgebra {
    close_named(&figure2(), &Signature::standard()).expect("small closure")
}

fn parse_suffix(name: &str, prefix: &str, max: u32) -> Option<u32> {
    let digits = name.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 3 {
        return None;
    }
    let n: u32 = digits.parse().ok()?;
    (n <= max).then_some(n)
}

/// Renders the fixture `name`. File names are the fixture name followed by
/// `.pfun.json` (generators or functions) and `.algebra.json` (tables).
pub fn fixture(name: &str) -> Result<Fixture, CatalogError> {
    let pfun = |alg: &ConcreteAlgebra| emit_pfun(&PfunFile::from_algebra(alg));
    let tables = |alg: &ConcreteAlgebra| -> Result<String, CatalogError> {
        Ok(emit_algebra(&alg.to_abstract()?))
    };
    let files = match name {
        "figure1" | "figure2" => {
            let (gens, closure) = if name == "figure1" {
                (figure1(), figure1_closure())
            } else {
                (figure2(), figure2_closure())
            };
            let gen_file = PfunFile::new(&gens.base, gens.names.iter().map(String::as_str).zip(&gens.functions));
            vec![
                (format!("{name}.pfun.json"), emit_pfun(&gen_file)),
                (format!("{name}.closure.pfun.json"), pfun(&closure)),
                (format!("{name}.algebra.json"), tables(&closure)?),
            ]
        }
        _ => {
            if let Some(n) = parse_suffix(name, "boolean-", MAX_BOOLEAN_ATOMS) {
                vec![(
                    format!("{name}.algebra.json"),
                    emit_algebra(&FiniteAlgebra::boolean_as_algebra(n)),
                )]
            } else if let Some(n) = parse_suffix(name, "example43-truncation-", MAX_TRUNCATION)
                .filter(|&n| n >= 1)
            {
                let t = ninfty::truncate(n)?;
                vec![
                    (format!("{name}.pfun.json"), pfun(&t)),
                    (format!("{name}.algebra.json"), tables(&t)?),
                ]
            } else {
                return Err(CatalogError::UnknownFixture(name.to_string()));
            }
        }
    };
    Ok(Fixture {
        name: name.to_string(),
        files,
    })
}
