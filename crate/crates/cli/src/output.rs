use std::fmt::Write;

use crate::Format;

/// Time-steps kept by `--subsample k`: `k, 2k, ...` and always the last one.
pub fn sampled_steps(len: usize, every: u64) -> Vec<usize> {
    let every = every.max(1) as usize;
    let mut steps: Vec<usize> = (every..=len).step_by(every).collect();
    if len > 0 && steps.last() != Some(&len) {
        steps.push(len);
    }
    steps
}

/// Renders one curve. Uses `.` decimals and `\n` line endings regardless
/// of locale.
pub fn render_series(error_pct: &[f64], every: u64, format: Format) -> String {
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("t,error_pct\n");
    }
    let sep = match format {
        Format::Csv => ',',
        Format::Plain => ' ',
    };
    for t in sampled_steps(error_pct.len(), every) {
        writeln!(out, "{t}{sep}{}", error_pct[t - 1]).expect("writing to a String");
    }
    out
}

pub fn file_name(experiment: u32, label: &str, format: Format) -> String {
    let ext = match format {
        Format::Csv => "csv",
        Format::Plain => "txt",
    };
    format!("expt{experiment}_{label}.{ext}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsampling_keeps_last_step() {
        assert_eq!(sampled_steps(100, 20), vec![20, 40, 60, 80, 100]);
        assert_eq!(sampled_steps(105, 20), vec![20, 40, 60, 80, 100, 105]);
        assert_eq!(sampled_steps(3, 1), vec![1, 2, 3]);
        assert_eq!(sampled_steps(5, 10), vec![5]);
    }

    #[test]
    fn renders_csv_and_plain() {
        let s = [100.0, 50.0, 12.5];
        assert_eq!(
            render_series(&s, 1, Format::Csv),
            "t,error_pct\n1,100\n2,50\n3,12.5\n"
        );
        assert_eq!(render_series(&s, 2, Format::Plain), "2 50\n3 12.5\n");
    }
}
