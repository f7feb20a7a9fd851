use std::collections::BTreeMap;
use std::path::Path;

use mprisk::dist::{family_params, make_empirical};
use mprisk::io::{read_sample_csv, ColumnSelector};
use mprisk::{Distribution, ParametricFamily};

use crate::args::DistArgs;
use crate::CliError;

/// A resolved risk with a display label.
pub struct Risk {
    pub label: String,
    pub dist: Box<dyn Distribution>,
}

pub fn from_args(args: &DistArgs) -> Result<Risk, CliError> {
    match (&args.dist, &args.data) {
        (Some(name), None) => {
            if args.scale.is_some() {
                return Err(CliError::input("--scale applies to --data only"));
            }
            let params: BTreeMap<String, f64> = args
                .family_flags()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            family(name, &params)
        }
        (None, Some(path)) => {
            if let Some((flag, _)) = args.family_flags().first() {
                return Err(CliError::input(format!("--{flag} applies to --dist only")));
            }
            let column: ColumnSelector = args.column.parse().expect("infallible");
            sample(path, &column, args.scale)
        }
        _ => Err(CliError::input("give exactly one of --dist or --data")),
    }
}

/// Checks every given parameter belongs to `name` and builds the family.
pub fn family_params_checked(name: &str, params: &BTreeMap<String, f64>) -> Result<ParametricFamily, CliError> {
    let known = family_params(name).ok_or_else(|| {
        CliError::input(format!(
            "unknown distribution family `{name}` (known: {})",
            mprisk::dist::family_names().join(", ")
        ))
    })?;
    if let Some(extra) = params.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(CliError::input(format!(
            "{name} takes {}, not `{extra}`",
            known.join(", ")
        )));
    }
    Ok(ParametricFamily::from_params(name, params)?)
}

fn family(name: &str, params: &BTreeMap<String, f64>) -> Result<Risk, CliError> {
    let family = family_params_checked(name, params)?;
    let label = format!(
        "{}({})",
        family.name(),
        family
            .params()
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(Risk {
        label,
        dist: family.build()?,
    })
}

fn sample(path: &Path, column: &ColumnSelector, scale: Option<f64>) -> Result<Risk, CliError> {
    let (dist, report) = read_sample_csv(path, column, scale)?;
    if !report.skipped_lines.is_empty() {
        eprintln!(
            "note: skipped {} row(s) with an empty field (lines {:?})",
            report.skipped_lines.len(),
            report.skipped_lines
        );
    }
    Ok(Risk {
        label: path.display().to_string(),
        dist: Box::new(dist),
    })
}

/// Parses `name:key=value,...`.
///
/// `discrete` takes `values` and optional `weights` as `/`-separated lists;
/// `data` takes `path` and optional `column` and `scale`.
pub fn from_spec(spec: &str) -> Result<Risk, CliError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let name = name.trim();
    let mut pairs = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("`{item}` in spec `{spec}` is not key=value")))?;
        pairs.insert(k.trim().to_string(), v.trim().to_string());
    }
    let take = |key: &str| pairs.get(key).map(String::as_str);
    let check_keys = |allowed: &[&str]| -> Result<(), CliError> {
        match pairs.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::input(format!("{name} does not take `{k}`"))),
            None => Ok(()),
        }
    };
    let mut risk = match name {
        "discrete" => {
            check_keys(&["values", "weights"])?;
            let values = number_list(take("values").ok_or_else(|| CliError::input("discrete needs values=..."))?)?;
            let weights = take("weights").map(number_list).transpose()?;
            Risk {
                label: String::new(),
                dist: Box::new(make_empirical(values, weights)?),
            }
        }
        "data" => {
            check_keys(&["path", "column", "scale"])?;
            let path = take("path").ok_or_else(|| CliError::input("data needs path=..."))?;
            let column: ColumnSelector = take("column").unwrap_or("0").parse().expect("infallible");
            let scale = take("scale").map(number).transpose()?;
            sample(Path::new(path), &column, scale)?
        }
        _ => {
            let params = pairs
                .iter()
                .map(|(k, v)| Ok((k.clone(), number(v)?)))
                .collect::<Result<BTreeMap<_, _>, CliError>>()?;
            family(name, &params)?
        }
    };
    risk.label = spec.to_string();
    Ok(risk)
}

fn number(s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::input(format!("`{s}` is not a number")))
}

fn number_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split('/').map(number).collect()
}
