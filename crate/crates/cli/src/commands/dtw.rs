use std::path::PathBuf;

use clap::Args;
use simgroup::dtw::{dtw_distance, warp_path};

use crate::error::{CliError, Context};
use crate::io::{load_series, parse_column};

#[derive(Debug, Args)]
pub struct DtwArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Value column in both files: 1-based position or header name.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    #[arg(long, default_value_t = 1.0)]
    pub weight: f64,
    /// Also print the warping path as 1-based (i,j) pairs.
    #[arg(long)]
    pub path: bool,
}

pub fn run(args: &DtwArgs) -> Result<(), CliError> {
    let column = args.column.as_deref().map(parse_column);
    let header = args.no_header.then_some(false);
    let a = load_series(&args.a, column.clone(), header)?;
    let b = load_series(&args.b, column, header)?;
    let (distance, matrix) = dtw_distance(a.values(), b.values(), args.weight).context("DTW")?;
    println!("{distance}");
    if args.path {
        for (i, j) in warp_path(&matrix).pairs() {
            println!("({},{})", i + 1, j + 1);
        }
    }
    Ok(())
}
