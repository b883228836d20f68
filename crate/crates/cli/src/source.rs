//! Source selection: an explicit JSON file or one of the generated families.

use std::fs;
use std::path::Path;

use nmim::sources::{normal_discrete, rayleigh_discrete, storage_example, zipf};
use nmim::Distribution;

use crate::args::SourceArgs;
use crate::{CliError, Result};

/// Reads `{"probs": [..]}`.
pub fn read_distribution(path: &Path) -> Result<Distribution> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn load(args: &SourceArgs) -> Result<Distribution> {
    let need_n = || {
        args.n
            .ok_or_else(|| CliError::Validation("generated sources need --n".into()))
    };
    let d = if let Some(path) = &args.input {
        read_distribution(path)?
    } else if let Some(n) = args.uniform {
        Distribution::uniform(n)?
    } else if args.zipf {
        zipf(need_n()?, args.exponent)?
    } else if args.normal {
        normal_discrete(need_n()?)?
    } else if args.rayleigh {
        rayleigh_discrete(need_n()?)?
    } else if args.storage {
        storage_example()
    } else {
        return Err(CliError::Validation(
            "no source given: use --input, --uniform, --zipf, --normal, --rayleigh or --storage"
                .into(),
        ));
    };
    Ok(d)
}
