//! Built-in models and the structure-equation text format.

mod dsl;

use std::collections::BTreeMap;

pub use dsl::{
    auto_conjugate_name, parse, parse_expression, parse_with_params, print, print_expr, DslError, DslErrorKind,
};

use crate::algebra::{AlgebraError, DiagonalAction, Form, Model, ModelSpec};
use crate::linalg::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown model `{0}` (run `list` for the catalog)")]
    UnknownModel(String),
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Structure equations of the nilpotent and solvable cases, `dφ^k` in DSL syntax.
struct Nakamura {
    case: &'static str,
    dim: usize,
    equations: &'static [(&'static str, &'static str)],
    params: &'static [&'static str],
}

const NAKAMURA: &[Nakamura] = &[
    Nakamura {
        case: "III.2",
        dim: 3,
        equations: &[("p3", "-p1*p2")],
        params: &[],
    },
    Nakamura {
        case: "III.3",
        dim: 3,
        equations: &[("p2", "-p1*p2"), ("p3", "p1*p3")],
        params: &[],
    },
    Nakamura {
        case: "IV.2",
        dim: 4,
        equations: &[("p4", "-p2*p3")],
        params: &[],
    },
    Nakamura {
        case: "IV.3",
        dim: 4,
        equations: &[("p3", "-p1*p2"), ("p4", "-2*p1*p3")],
        params: &[],
    },
    Nakamura {
        case: "IV.4",
        dim: 4,
        equations: &[("p3", "p2*p3"), ("p4", "-p2*p4")],
        params: &[],
    },
    Nakamura {
        case: "IV.6",
        dim: 4,
        equations: &[("p2", "p1*p2"), ("p3", "-p1*p3"), ("p4", "-p2*p3")],
        params: &[],
    },
    Nakamura {
        case: "V.2",
        dim: 5,
        equations: &[("p5", "p3*p4")],
        params: &[],
    },
    Nakamura {
        case: "V.3",
        dim: 5,
        equations: &[("p5", "-p1*p3 - p2*p4")],
        params: &[],
    },
    Nakamura {
        case: "V.4",
        dim: 5,
        equations: &[("p4", "-p1*p2"), ("p5", "-p1*p3")],
        params: &[],
    },
    Nakamura {
        case: "V.5",
        dim: 5,
        equations: &[("p4", "-p2*p3"), ("p5", "-2*p2*p4")],
        params: &[],
    },
    Nakamura {
        case: "V.6",
        dim: 5,
        equations: &[("p4", "-p1*p2"), ("p5", "-2*p1*p4 - p2*p3")],
        params: &[],
    },
    Nakamura {
        case: "V.7",
        dim: 5,
        equations: &[("p4", "p3*p4"), ("p5", "-p3*p5")],
        params: &[],
    },
    Nakamura {
        case: "V.8",
        dim: 5,
        equations: &[("p3", "-p1*p2"), ("p4", "-2*p1*p3"), ("p5", "-2*p2*p3")],
        params: &[],
    },
    Nakamura {
        case: "V.9",
        dim: 5,
        equations: &[("p3", "-p1*p2"), ("p4", "-2*p1*p3"), ("p5", "-3*p1*p4")],
        params: &[],
    },
    Nakamura {
        case: "V.10",
        dim: 5,
        equations: &[("p3", "-p1*p2"), ("p4", "-2*p1*p3"), ("p5", "-3*p1*p4 - p2*p3")],
        params: &[],
    },
    Nakamura {
        case: "V.12",
        dim: 5,
        equations: &[("p3", "p1*p3"), ("p4", "p2*p4"), ("p5", "-p1*p5 - p2*p5")],
        params: &[],
    },
    Nakamura {
        case: "V.15",
        dim: 5,
        equations: &[("p3", "p2*p3"), ("p4", "-p2*p4"), ("p5", "-p3*p4")],
        params: &[],
    },
    Nakamura {
        case: "V.17",
        dim: 5,
        equations: &[
            ("p2", "p1*p2"),
            ("p3", "alpha*p1*p3"),
            ("p4", "beta*p1*p4"),
            ("p5", "-(1 + alpha + beta)*p1*p5"),
        ],
        params: &["alpha", "beta"],
    },
];

/// Case labels of the solvable models, in catalog order.
pub fn nakamura_cases() -> Vec<&'static str> {
    NAKAMURA.iter().map(|c| c.case).collect()
}

fn nakamura_source(case: &Nakamura) -> String {
    let holo: Vec<String> = (1..=case.dim).map(|k| format!("p{k}")).collect();
    let mut src = format!("model nakamura:{} dim {}\n", case.case, case.dim);
    for p in case.params {
        src.push_str(&format!("param {p} = 1\n"));
    }
    src.push_str(&format!("holo {}\n", holo.join(" ")));
    for (g, e) in case.equations {
        src.push_str(&format!("d {g} = {e}\n"));
    }
    src
}

/// Structure equations of the Calabi-Eckmann model `M_{u,v}`.
pub fn calabi_eckmann_source(u: u32, v: u32) -> String {
    let n = u + v + 1;
    let mut src = format!("model ce:u={u},v={v} dim {n}\nholo phi\n");
    let mut rhs = Vec::new();
    if u > 0 {
        src.push_str(&format!("gen w1 : (1,1) even trunc {} real\n", u + 1));
        rhs.push("w1".to_string());
    }
    if v > 0 {
        src.push_str(&format!("gen w2 : (1,1) even trunc {} real\n", v + 1));
        rhs.push(if rhs.is_empty() {
            "-i*w2".to_string()
        } else {
            "- i*w2".to_string()
        });
    }
    if rhs.is_empty() {
        rhs.push("0".into());
    }
    src.push_str(&format!("d phi = {}\n", rhs.join(" ")));
    src
}

pub fn torus_source(n: usize) -> String {
    let holo: Vec<String> = (1..=n).map(|k| format!("p{k}")).collect();
    format!("model torus:{n} dim {n}\nholo {}\n", holo.join(" "))
}

/// A catalog entry resolved to concrete data.
#[derive(Clone, Debug)]
pub struct CatalogModel {
    pub id: String,
    pub spec: ModelSpec,
    pub action: Option<DiagonalAction>,
}

impl CatalogModel {
    pub fn model(&self) -> Result<Model, AlgebraError> {
        match &self.action {
            Some(a) => Model::invariant(self.spec.clone(), a.clone()),
            None => Model::new(self.spec.clone()),
        }
    }
}

/// Weights of the order-4 automorphism used for the Iwasawa quotient, on `(φ¹, φ², φ³)`.
pub fn example1_weights() -> [Scalar; 3] {
    [Scalar::i(), Scalar::i(), Scalar::from_int(-1)]
}

/// Extends weights on holomorphic generators to their conjugates.
pub fn holomorphic_action(spec: &ModelSpec, holo: &[Scalar]) -> Result<DiagonalAction, CatalogError> {
    let gens = spec.algebra.generators();
    let mut weights = vec![Scalar::one(); gens.len()];
    let mut next = 0;
    for (g, gen) in gens.iter().enumerate() {
        if gen.bidegree == (1, 0) {
            let w = holo
                .get(next)
                .ok_or_else(|| CatalogError::InvalidParameter("too few action weights".into()))?;
            weights[g] = w.clone();
            weights[gen.conjugate] = w.conj();
            next += 1;
        }
    }
    if next != holo.len() {
        return Err(CatalogError::InvalidParameter("too many action weights".into()));
    }
    Ok(DiagonalAction { weights })
}

/// Example and pattern identifiers accepted by [`load`].
pub fn list() -> Vec<String> {
    let mut ids: Vec<String> = NAKAMURA.iter().map(|c| format!("nakamura:{}", c.case)).collect();
    ids.push("iwasawa".into());
    ids.push("example1:invariant".into());
    ids.push("torus:N".into());
    ids.push("ce:u=U,v=V".into());
    ids
}

fn parse_ce(rest: &str) -> Option<(u32, u32)> {
    let (a, b) = rest.split_once(',')?;
    let u = a.trim().strip_prefix("u=")?.parse().ok()?;
    let v = b.trim().strip_prefix("v=")?.parse().ok()?;
    Some((u, v))
}

fn check_v17(params: &BTreeMap<String, Scalar>) -> Result<(), CatalogError> {
    let get = |k: &str| params.get(k).cloned().unwrap_or_else(Scalar::one);
    let (a, b) = (get("alpha"), get("beta"));
    let c = &(&Scalar::one() + &a) + &b;
    if (&(&a * &b) * &c).is_zero() {
        return Err(CatalogError::InvalidParameter(format!(
            "V.17 needs alpha*beta*(1+alpha+beta) != 0, got alpha = {a}, beta = {b}"
        )));
    }
    Ok(())
}

/// Resolves a catalog identifier. `params` supplies model parameters (V.17's `alpha`, `beta`).
pub fn load(id: &str, params: &BTreeMap<String, Scalar>) -> Result<CatalogModel, CatalogError> {
    let no_params = || -> Result<(), CatalogError> {
        match params.keys().next() {
            Some(k) => Err(CatalogError::InvalidParameter(format!(
                "`{id}` takes no parameter `{k}`"
            ))),
            None => Ok(()),
        }
    };
    let plain = |spec: ModelSpec| CatalogModel {
        id: id.to_string(),
        spec,
        action: None,
    };
    if let Some(case) = id.strip_prefix("nakamura:") {
        let entry = NAKAMURA
            .iter()
            .find(|c| c.case == case)
            .ok_or_else(|| CatalogError::UnknownModel(id.into()))?;
        if entry.case == "V.17" {
            check_v17(params)?;
        }
        let src = nakamura_source(entry);
        let spec = parse_with_params(&src, params).map_err(|e| match e.kind {
            DslErrorKind::UnknownParameter(p) => {
                CatalogError::InvalidParameter(format!("`{id}` takes no parameter `{p}`"))
            }
            _ => CatalogError::Dsl(e),
        })?;
        return Ok(plain(spec));
    }
    if id == "iwasawa" {
        no_params()?;
        let mut spec = parse(&nakamura_source(&NAKAMURA[0]))?;
        spec.name = "iwasawa".into();
        return Ok(plain(spec));
    }
    if id == "example1:invariant" {
        no_params()?;
        let mut spec = parse(&nakamura_source(&NAKAMURA[0]))?;
        spec.name = "example1:invariant".into();
        let action = holomorphic_action(&spec, &example1_weights())?;
        return Ok(CatalogModel {
            id: id.into(),
            spec,
            action: Some(action),
        });
    }
    if let Some(n) = id.strip_prefix("torus:") {
        no_params()?;
        let n: usize = n.parse().map_err(|_| CatalogError::UnknownModel(id.into()))?;
        if !(1..=6).contains(&n) {
            return Err(CatalogError::InvalidParameter(
                "torus dimension must be between 1 and 6".into(),
            ));
        }
        return Ok(plain(parse(&torus_source(n))?));
    }
    if let Some(rest) = id.strip_prefix("ce:") {
        no_params()?;
        let (u, v) = parse_ce(rest).ok_or_else(|| CatalogError::UnknownModel(id.into()))?;
        return Ok(plain(parse(&calabi_eckmann_source(u, v))?));
    }
    Err(CatalogError::UnknownModel(id.into()))
}

/// Parses a form written in expression syntax against a model's generators.
pub fn parse_form(model: &Model, expr: &str) -> Result<Form, DslError> {
    dsl::parse_expression(model.algebra(), &model.spec().params, expr)
}

/// One row of the reference table of triple products.
#[derive(Clone, Debug)]
pub struct AppendixCase {
    pub case: &'static str,
    pub triple: [&'static str; 3],
    /// Representative as printed in the table.
    pub listed: &'static str,
    /// Representative actually used for comparison when the printed one is unusable.
    pub corrected: Option<&'static str>,
}

impl AppendixCase {
    pub fn expected(&self) -> &'static str {
        self.corrected.unwrap_or(self.listed)
    }
}

/// Reference triples; V.17 depends on whether `beta = -1`.
pub fn appendix_case(case: &str, params: &BTreeMap<String, Scalar>) -> Result<AppendixCase, CatalogError> {
    let c = |case, triple, listed| AppendixCase {
        case,
        triple,
        listed,
        corrected: None,
    };
    Ok(match case {
        "III.2" => c("III.2", ["p1*p2", "q1*q2", "q1*q2"], "p3*q1*q2*q3"),
        "III.3" => c("III.3", ["p1*p2", "q1*q2", "q1*q3"], "p2*q1*q2*q3"),
        "IV.2" => c("IV.2", ["p2*p3", "q2*q3", "q2*q3"], "p4*q2*q3*q4"),
        "IV.3" => c("IV.3", ["p1*p2", "q1*q2", "q2"], "p3*q2*q3"),
        "IV.4" => c("IV.4", ["p2*p3", "q2*q3", "q2*q4"], "p3*q2*q3*q4"),
        "IV.6" => c("IV.6", ["p2*p3", "q2*q3", "q2*q3"], "p4*q2*q3*q4"),
        "V.2" => c("V.2", ["p3*p4", "q3*q4", "q3*q4"], "p5*q3*q4*q5"),
        "V.3" => c("V.3", ["p1*p2*p4", "q1*q2*q4", "q2"], "p1*p5*q1*q2*q5"),
        "V.4" => c("V.4", ["p1*p2", "q1*q2", "q1*q2"], "p4*q1*q2*q4"),
        "V.5" => c("V.5", ["p2*p3", "q2*q3", "q3"], "p4*q3*q4"),
        "V.6" => c("V.6", ["p1*p2", "q1*q2", "q2"], "p4*q2*q4"),
        "V.7" => c("V.7", ["p3*p4", "q3*q4", "q3*q5"], "p4*q3*q4*q5"),
        "V.8" => c("V.8", ["p2*p3", "q2*q3", "q2"], "p5*q2*q5"),
        // the printed representative has bidegree (1,3) but the product lives in (1,2)
        "V.9" => AppendixCase {
            case: "V.9",
            triple: ["p1*p2", "q1*q2", "q2"],
            listed: "p4*q3*q4*q5",
            corrected: Some("p3*q2*q3"),
        },
        "V.10" => c("V.10", ["p1*p2*p4*p5", "q1*q2*q4*q5", "q2"], "p3*p4*p5*q2*q3*q4*q5"),
        "V.12" => c("V.12", ["p2*p3*p5", "q2*q3*q5", "q2*q4"], "p3*p5*q2*q3*q4*q5"),
        "V.15" => c("V.15", ["p3*p4", "q3*q4", "q3*q4"], "p5*q3*q4*q5"),
        "V.17" => {
            let beta = params.get("beta").cloned().unwrap_or_else(Scalar::one);
            if beta == Scalar::from_int(-1) {
                c(
                    "V.17",
                    ["p1*p2*p3*p4", "q1*q2*q3*q4", "q1*q5"],
                    "p2*p3*p4*q1*q2*q3*q4*q5",
                )
            } else {
                c("V.17", ["p1*p2*p4", "q1*q2*q4", "q1*q3*q5"], "p2*p4*q1*q2*q3*q4*q5")
            }
        }
        _ => return Err(CatalogError::UnknownModel(format!("nakamura:{case}"))),
    })
}
