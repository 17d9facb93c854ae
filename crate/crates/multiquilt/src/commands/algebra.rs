use multiquilt_core::ainfty::{
    check_ainfty, check_ainfty_bar, check_functor, check_functor_bar, AInftyData, AInftyError,
    Arithmetic, FunctorData, Q,
};
use serde_json::{json, Value};

use super::{read_input, to_value};
use crate::cli::{AInftyArgs, CliError};
use crate::formats::{AInftyDoc, FunctorDoc};

const EXTERIOR_DGA: &str = include_str!("../../data/exterior_dga.json");
const EXTERIOR_MORPHISM: &str = include_str!("../../data/exterior_morphism.json");

/// The exterior algebra on two degree-one generators with `dx = xy`, as shipped in `data/`.
pub fn bundled_dga() -> AInftyData {
    let doc: AInftyDoc = serde_json::from_str(EXTERIOR_DGA).expect("bundled file parses");
    doc.to_data().expect("bundled file is valid")
}

/// The automorphism `x ↦ x + y` of [`bundled_dga`].
pub fn bundled_morphism() -> FunctorData {
    let a = bundled_dga();
    let doc: FunctorDoc = serde_json::from_str(EXTERIOR_MORPHISM).expect("bundled file parses");
    doc.to_data(&a, &a).expect("bundled file is valid")
}

fn strings(r: &[Q]) -> Vec<String> {
    r.iter().map(ToString::to_string).collect()
}

fn first_nonzero(r: &[Q]) -> Option<usize> {
    r.iter()
        .position(|q| *q != Q::from_integer(0))
        .map(|k| k + 1)
}

pub fn ainfty_check(args: &AInftyArgs) -> Result<Value, CliError> {
    let load = |p: &Option<std::path::PathBuf>| -> Result<Option<AInftyData>, CliError> {
        match p {
            None => Ok(None),
            Some(path) => {
                let doc: AInftyDoc = read_input(path)?;
                doc.to_data()
                    .map(Some)
                    .map_err(|e| CliError::domain("ainfty", e))
            }
        }
    };
    let a = load(&args.a)?.unwrap_or_else(bundled_dga);
    let b = load(&args.b)?.unwrap_or_else(|| a.clone());
    let f = match &args.functor {
        Some(path) => {
            let doc: FunctorDoc = read_input(path)?;
            doc.to_data(&a, &b)
                .map_err(|e| CliError::domain("ainfty", e))?
        }
        None if a == b => FunctorData::identity(&a),
        None => {
            return Err(CliError::Usage(String::from(
                "--functor is required when the source and target differ",
            )))
        }
    };
    if args.dmax == 0 {
        return Err(CliError::Usage(String::from("--dmax must be at least 1")));
    }
    let arith = if args.mod2 {
        Arithmetic::Mod2
    } else {
        Arithmetic::Rational
    };
    let err = |e: AInftyError| CliError::domain("ainfty", e);
    let ra = check_ainfty(&a, args.dmax, arith).map_err(err)?;
    let rb = check_ainfty(&b, args.dmax, arith).map_err(err)?;
    let rf = check_functor(&a, &b, &f, args.dmax, arith).map_err(err)?;
    let bar = if args.bar {
        let ba = check_ainfty_bar(&a, args.dmax, arith).map_err(err)?;
        let bb = check_ainfty_bar(&b, args.dmax, arith).map_err(err)?;
        let bf = check_functor_bar(&a, &b, &f, args.dmax, arith).map_err(err)?;
        let all_zero = [&ba, &bb, &bf].iter().all(|r| first_nonzero(r).is_none());
        json!({
            "a": strings(&ba),
            "b": strings(&bb),
            "functor": strings(&bf),
            "all_zero": all_zero,
        })
    } else {
        Value::Null
    };
    let all_zero = [&ra, &rb, &rf].iter().all(|r| first_nonzero(r).is_none());
    to_value(json!({
        "dmax": args.dmax,
        "arithmetic": if args.mod2 { "mod2" } else { "rational" },
        "a_residuals": strings(&ra),
        "b_residuals": strings(&rb),
        "functor_residuals": strings(&rf),
        "first_failing_arity": {
            "a": first_nonzero(&ra),
            "b": first_nonzero(&rb),
            "functor": first_nonzero(&rf),
        },
        "all_zero": all_zero,
        "bar": bar,
    }))
}
