//! Potential tables: CSV rows of position columns followed by the value.
//! A header row is skipped when its first field is not a number.

use std::io::Read;

use hyperwave_core::dmt::TablePotential;
use hyperwave_core::{Dimension, Point};

use crate::error::CliError;

pub fn read_potential_table<R: Read>(reader: R) -> Result<TablePotential, CliError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows: Vec<(Point, f64)> = Vec::new();
    let mut width = None;
    for (line, rec) in csv.records().enumerate() {
        let rec = rec?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let Ok(nums) = parsed else {
            if line == 0 {
                continue;
            }
            return Err(CliError::Usage(format!("potential table row {}: non-numeric field", line + 1)));
        };
        if !(2..=4).contains(&nums.len()) {
            return Err(CliError::Usage(format!(
                "potential table row {}: expected 2 to 4 columns, got {}",
                line + 1,
                nums.len()
            )));
        }
        if *width.get_or_insert(nums.len()) != nums.len() {
            return Err(CliError::Usage(format!("potential table row {}: ragged row", line + 1)));
        }
        let mut p = [0.0; 3];
        p[..nums.len() - 1].copy_from_slice(&nums[..nums.len() - 1]);
        rows.push((p, nums[nums.len() - 1]));
    }
    let d = width.ok_or_else(|| CliError::Usage("potential table is empty".into()))? - 1;
    Ok(TablePotential::from_rows(Dimension::new(d)?, &rows)?)
}

pub fn read_potential_file(path: &str) -> Result<TablePotential, CliError> {
    let file = std::fs::File::open(path).map_err(|source| CliError::Input {
        path: path.to_string(),
        source,
    })?;
    read_potential_table(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_grid_with_header() {
        let text = "x,y,f\n0,0,1\n1,0,2\n0,1,3\n1,1,4\n";
        let t = read_potential_table(text.as_bytes()).unwrap();
        assert!((t.eval(&[0.5, 0.5, 0.0]).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(read_potential_table("0,1\n1,2,3\n".as_bytes()).is_err());
        assert!(read_potential_table("x,f\n".as_bytes()).is_err());
    }
}
