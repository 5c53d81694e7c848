//! The regression corpus shipped with the binary.

use crate::report::{Options, Report};
use crate::run::Runner;
use crate::script::{parse, ScriptError};

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        /// (file name, source) of every corpus script.
        pub const CORPUS: &[(&str, &str)] = &[$(($name, include_str!(concat!("../corpus/", $name)))),*];
    };
}

corpus!(
    "01_exterior.fol",
    "02_resonance.fol",
    "03_blowup.fol",
    "04_pencil_basics.fol",
    "05_log_pencil.fol",
    "06_pencil_from_three.fol",
    "07_curved_pencil.fol",
    "08_tangent_log_pencil.fol",
    "09_normal_forms.fol",
    "10_complex_hyperbolic.fol",
    "11_jouanolou.fol",
    "12_surfaces.fol",
    "13_errors.fol",
);

/// Runs one script with a fresh random stream, so reports do not depend on
/// the order scripts are run in.
pub fn run_source(name: &str, src: &str, options: &Options) -> Result<(Report, Runner), ScriptError> {
    let script = parse(src)?;
    let mut runner = Runner::new(options.clone());
    let report = runner.run(name, &script);
    Ok((report, runner))
}

pub fn run_corpus(options: &Options) -> Vec<Report> {
    CORPUS
        .iter()
        .map(|(name, src)| run_source(name, src, options).expect("corpus scripts parse").0)
        .collect()
}
