//! A flat mini-language for chaining postprocessing steps.
//!
//! Steps are separated by `;` and run left to right:
//!
//! | step | effect |
//! |------|--------|
//! | `remove:<class>[,<N][,>N][,xK\|,fix]` | remove edges of class `free`, `dangling`, `bridged` or `any`, optionally limited by length; with `xK` or `fix`, repeat remove-and-retrace up to K rounds or until nothing changes |
//! | `merge-amb:N` | merge ambiguities joined by connectors of at most N pixels |
//! | `connect[:aw=A,dw=D,th=T,fit=F,at=ID]` | connect terminals by cost, at one ambiguity or all of them |
//! | `retrace` | trace the working image again from scratch |
//! | `reverse:ID` | reverse the point order of one edge |
//!
//! ```
//! use edgetrace::pipeline::parse_pipeline;
//!
//! let steps = parse_pipeline("remove:free,<20; remove:dangling,<30,x2; merge-amb:3; connect:aw=1,dw=0.25,th=1.57").unwrap();
//! assert_eq!(steps.len(), 4);
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::postprocess::{
    connect_all_ambiguities, connect_edges_at_ambiguity, merge_nearby_ambiguities, remove_edges_where,
    remove_iterative, reverse_edge_in, ConnectionCostParams, EdgeClass, EdgeFilter, Rounds,
};
use crate::trace::{trace_all, TraceResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Remove { filter: EdgeFilter, rounds: Option<Rounds> },
    MergeAmbiguities { max_connector_len: usize },
    Connect { params: ConnectionCostParams, ambiguity: Option<usize> },
    Retrace,
    Reverse { edge: usize },
}

impl Step {
    pub fn apply(&self, result: &TraceResult) -> Result<TraceResult> {
        match self {
            Step::Remove { filter, rounds: None } => remove_edges_where(result, filter),
            Step::Remove {
                filter,
                rounds: Some(rounds),
            } => remove_iterative(result, filter, *rounds).map(|(r, _)| r),
            Step::MergeAmbiguities { max_connector_len } => Ok(merge_nearby_ambiguities(result, *max_connector_len)),
            Step::Connect {
                params,
                ambiguity: Some(id),
            } => connect_edges_at_ambiguity(result, *id, params),
            Step::Connect { params, ambiguity: None } => connect_all_ambiguities(result, params),
            Step::Retrace => Ok(trace_all(&result.image)),
            Step::Reverse { edge } => reverse_edge_in(result, *edge),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Remove { filter, rounds } => {
                let class = match filter.class {
                    None => "any",
                    Some(EdgeClass::Free) => "free",
                    Some(EdgeClass::Dangling) => "dangling",
                    Some(EdgeClass::Bridged) => "bridged",
                };
                write!(f, "remove:{class}")?;
                if let Some(n) = filter.shorter_than {
                    write!(f, ",<{n}")?;
                }
                if let Some(n) = filter.longer_than {
                    write!(f, ",>{n}")?;
                }
                match rounds {
                    None => Ok(()),
                    Some(Rounds::Count(k)) => write!(f, ",x{k}"),
                    Some(Rounds::UntilFixpoint) => write!(f, ",fix"),
                }
            }
            Step::MergeAmbiguities { max_connector_len } => write!(f, "merge-amb:{max_connector_len}"),
            Step::Connect { params, ambiguity } => {
                write!(
                    f,
                    "connect:aw={},dw={},th={},fit={}",
                    params.angle_weight, params.distance_weight, params.cost_threshold, params.fit_length
                )?;
                match ambiguity {
                    Some(id) => write!(f, ",at={id}"),
                    None => Ok(()),
                }
            }
            Step::Retrace => write!(f, "retrace"),
            Step::Reverse { edge } => write!(f, "reverse:{edge}"),
        }
    }
}

fn fail(step: &str, reason: impl Into<String>) -> Error {
    Error::Pipeline {
        step: step.to_string(),
        reason: reason.into(),
    }
}

fn number<T: std::str::FromStr>(step: &str, text: &str, what: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| fail(step, format!("{what} `{text}` is not a valid number")))
}

fn parse_step(text: &str) -> Result<Step> {
    let (name, args) = match text.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (text, None),
    };
    let args_list = || -> Vec<&str> {
        args.map(|a| a.split(',').map(str::trim).filter(|s| !s.is_empty()).collect())
            .unwrap_or_default()
    };
    let required = || args.filter(|a| !a.is_empty()).ok_or_else(|| fail(text, "missing argument"));
    match name {
        "remove" => {
            let list = args_list();
            let (class, rest) = list.split_first().ok_or_else(|| fail(text, "missing edge class"))?;
            let mut filter = EdgeFilter {
                class: match *class {
                    "free" => Some(EdgeClass::Free),
                    "dangling" => Some(EdgeClass::Dangling),
                    "bridged" => Some(EdgeClass::Bridged),
                    "any" => None,
                    other => return Err(fail(text, format!("unknown edge class `{other}`"))),
                },
                ..EdgeFilter::default()
            };
            let mut rounds = None;
            for arg in rest {
                if let Some(n) = arg.strip_prefix('<') {
                    filter.shorter_than = Some(number(text, n, "length")?);
                } else if let Some(n) = arg.strip_prefix('>') {
                    filter.longer_than = Some(number(text, n, "length")?);
                } else if let Some(k) = arg.strip_prefix('x') {
                    rounds = Some(Rounds::Count(number(text, k, "round count")?));
                } else if *arg == "fix" {
                    rounds = Some(Rounds::UntilFixpoint);
                } else {
                    return Err(fail(text, format!("unknown remove option `{arg}`")));
                }
            }
            Ok(Step::Remove { filter, rounds })
        }
        "merge-amb" => Ok(Step::MergeAmbiguities {
            max_connector_len: number(text, required()?, "connector length")?,
        }),
        "connect" => {
            let mut params = ConnectionCostParams::default();
            let mut ambiguity = None;
            for arg in args_list() {
                let (key, value) = arg
                    .split_once('=')
                    .ok_or_else(|| fail(text, format!("expected key=value, got `{arg}`")))?;
                match key.trim() {
                    "aw" => params.angle_weight = number(text, value, "angle weight")?,
                    "dw" => params.distance_weight = number(text, value, "distance weight")?,
                    "th" => params.cost_threshold = number(text, value, "threshold")?,
                    "fit" => params.fit_length = number(text, value, "fit length")?,
                    "at" => ambiguity = Some(number(text, value, "ambiguity id")?),
                    other => return Err(fail(text, format!("unknown connect option `{other}`"))),
                }
            }
            params.validate().map_err(|e| fail(text, e.to_string()))?;
            Ok(Step::Connect { params, ambiguity })
        }
        "retrace" if args.is_none() => Ok(Step::Retrace),
        "reverse" => Ok(Step::Reverse {
            edge: number(text, required()?, "edge id")?,
        }),
        _ => Err(fail(text, "unknown step")),
    }
}

/// Parses a `;`-separated step list. Empty steps are skipped.
pub fn parse_pipeline(text: &str) -> Result<Vec<Step>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_step)
        .collect()
}

/// Applies steps in order.
pub fn run_pipeline(result: &TraceResult, steps: &[Step]) -> Result<TraceResult> {
    let mut current = result.clone();
    for step in steps {
        current = step.apply(&current).map_err(|e| match e {
            Error::Pipeline { .. } => e,
            other => fail(&step.to_string(), other.to_string()),
        })?;
    }
    Ok(current)
}
