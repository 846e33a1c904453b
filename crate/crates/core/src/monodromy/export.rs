use std::io::Write;

use super::lift::LogLiftState;
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::levelset::LevelSetSlice;

const HEADER: [&str; 12] = [
    "step", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im", "L1_re", "L1_im", "L2_re", "L2_im",
    "L3_re", "L3_im", "residual",
];

/// Writes a trace as CSV, one row per accepted step.
pub fn write_trace_csv<W: Write>(states: &[LogLiftState], slice: &LevelSetSlice, out: W) -> Result<()> {
    let io_err = |e: csv::Error| Error::Configuration(format!("cannot write trace: {e}"));
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(HEADER).map_err(io_err)?;
    for (step, s) in states.iter().enumerate() {
        let mut row = vec![step.to_string()];
        for z in [s.lambda1, s.lambda2, s.l1, s.l2, s.l3] {
            row.push(fmt_f64(z.re));
            row.push(fmt_f64(z.im));
        }
        row.push(fmt_f64(s.residual(slice).norm()));
        writer.write_record(&row).map_err(io_err)?;
    }
    writer.flush().map_err(|e| Error::Configuration(format!("cannot write trace: {e}")))?;
    Ok(())
}
