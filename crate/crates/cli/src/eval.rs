use ccr_core::algebra::parse::{parse_expr, parse_state};
use ccr_core::algebra::{apply, normal_order, normal_order_in, RepresentationKind};

use crate::args::{EvalArgs, KindArg};
use crate::config::parse_kind;
use crate::{CliError, CliResult};

pub struct EvalOutput {
    /// The exact result: the normal form, or the resulting state when one was given.
    pub stdout: String,
    /// Secondary information for stderr (the normal form when a state was given).
    pub note: Option<String>,
}

/// Evaluates `args.expr`. Without `--state` the normal form is the result;
/// with it, the resulting state is the result and the normal form, when it
/// exists, is reported as a note.
pub fn run(args: &EvalArgs) -> CliResult<EvalOutput> {
    let expr = parse_expr(&args.expr).map_err(|e| CliError::Config(format!("expression: {e}")))?;
    let kind = match args.kind {
        Some(k) => Some(parse_kind(k, args.lambda.as_deref())?),
        None if args.lambda.is_some() => {
            return Err(CliError::Config("--lambda requires --kind lambda".into()))
        }
        None if args.state.is_some() => Some(parse_kind(KindArg::Antifock, None)?),
        None => None,
    };
    let normal = match &kind {
        None => Ok(normal_order(&expr)),
        Some(k) => normal_order_in(&expr, k),
    };
    match &args.state {
        None => Ok(EvalOutput { stdout: normal?.to_string(), note: None }),
        Some(text) => {
            let kind: RepresentationKind = kind.expect("a state fixes the representation");
            let state =
                parse_state(text, &kind).map_err(|e| CliError::Config(format!("state: {e}")))?;
            let note = match normal {
                Ok(nf) => format!("normal form: {nf}"),
                Err(e) => format!("normal form unavailable: {e}"),
            };
            Ok(EvalOutput { stdout: apply(&expr, &state).to_string(), note: Some(note) })
        }
    }
}
