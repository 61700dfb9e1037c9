//! Text formats: point files and labelled dissimilarity matrices.
//!
//! Point files hold one point per line, coordinates separated by commas
//! and/or whitespace. `#` starts a comment; blank lines are skipped.
//!
//! Matrix files are CSV with a header row of guest names (the first header
//! cell is ignored) followed by one row per guest: the guest's name, then
//! its dissimilarity to every guest in header order.

use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::mds::DissimilarityMatrix;
use crate::points::PointSet;
use crate::seatplan::GuestList;

fn parse_error(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: source.to_string(),
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses a point file. `source` names the input in error messages.
pub fn parse_points(text: &str, source: &str) -> Result<PointSet> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let coords = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| {
                        parse_error(
                            source,
                            line,
                            format!("expected a finite number, found '{t}'"),
                        )
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(parse_error(
                    source,
                    line,
                    format!("expected {d} coordinates, found {}", coords.len()),
                ))
            }
            _ => {}
        }
        rows.push(coords);
    }
    if rows.is_empty() {
        return Err(parse_error(
            source,
            0,
            "expected at least one point, found none",
        ));
    }
    PointSet::from_rows(&rows)
}

pub fn read_points(path: &Path) -> Result<PointSet> {
    parse_points(&read(path)?, &path.display().to_string())
}

/// Parses a labelled matrix CSV into guests and their dissimilarities.
pub fn parse_matrix_csv(text: &str, source: &str) -> Result<(GuestList, DissimilarityMatrix)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(source, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        records.push((line, rec));
    }
    let Some(((header_line, header), body)) = records.split_first() else {
        return Err(parse_error(
            source,
            0,
            "expected a header row of guest names, found nothing",
        ));
    };
    let names: Vec<&str> = header.iter().skip(1).collect();
    let n = names.len();
    if n == 0 {
        return Err(parse_error(
            source,
            *header_line,
            "expected guest names after the first header cell",
        ));
    }
    let guests =
        GuestList::new(&names).map_err(|e| parse_error(source, *header_line, e.to_string()))?;
    if body.len() != n {
        return Err(parse_error(
            source,
            body.last().map_or(*header_line, |(l, _)| *l),
            format!("expected {n} matrix rows, found {}", body.len()),
        ));
    }

    let mut entries = Array2::zeros((n, n));
    for (i, (line, rec)) in body.iter().enumerate() {
        if rec.len() != n + 1 {
            return Err(parse_error(
                source,
                *line,
                format!("expected a name and {n} values, found {} cells", rec.len()),
            ));
        }
        let label = &rec[0];
        if label != guests.names()[i] {
            return Err(parse_error(
                source,
                *line,
                format!(
                    "expected row label '{}', found '{label}'",
                    guests.names()[i]
                ),
            ));
        }
        for (j, cell) in rec.iter().skip(1).enumerate() {
            entries[(i, j)] = cell.parse::<f64>().map_err(|_| {
                parse_error(
                    source,
                    *line,
                    format!(
                        "expected a number for column '{}', found '{cell}'",
                        guests.names()[j]
                    ),
                )
            })?;
        }
    }

    let line_of = |i: usize| body[i].0;
    let matrix = DissimilarityMatrix::new(entries).map_err(|e| match e {
        Error::Asymmetric {
            row,
            col,
            value,
            mirrored,
        } => {
            let g = guests.names();
            parse_error(
                source,
                line_of(row),
                format!(
                    "matrix not symmetric: ({}, {}) = {value} but ({}, {}) = {mirrored}",
                    g[row], g[col], g[col], g[row]
                ),
            )
        }
        other => parse_error(source, *header_line, other.to_string()),
    })?;
    Ok((guests, matrix))
}

pub fn read_matrix_csv(path: &Path) -> Result<(GuestList, DissimilarityMatrix)> {
    parse_matrix_csv(&read(path)?, &path.display().to_string())
}

/// Renders a matrix in the format [`parse_matrix_csv`] reads.
pub fn format_matrix_csv(guests: &GuestList, matrix: &DissimilarityMatrix) -> String {
    let mut out = String::from("guest");
    for name in guests.names() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, name) in guests.names().iter().enumerate() {
        out.push_str(name);
        for j in 0..matrix.n() {
            out.push(',');
            out.push_str(&matrix.get(i, j).to_string());
        }
        out.push('\n');
    }
    out
}

/// One point per line, comma separated, round-trippable through
/// [`parse_points`].
pub fn format_points(points: &PointSet) -> String {
    let mut out = String::new();
    for row in points.as_array().outer_iter() {
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn points_with_comments_and_mixed_separators() {
        let text = "# header\n1, 2\n\n3 4 # trailing\n5,\t6\n";
        let p = parse_points(text, "pts.txt").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.as_array()[(2, 1)], 6.0);
    }

    #[test]
    fn point_errors_name_file_and_line() {
        let err = parse_points("1 2\n3 4 5\n", "pts.txt").unwrap_err();
        assert_eq!(
            err.to_string(),
            "pts.txt:2: expected 2 coordinates, found 3"
        );
        let err = parse_points("1 x\n", "pts.txt").unwrap_err();
        assert_eq!(
            err.to_string(),
            "pts.txt:1: expected a finite number, found 'x'"
        );
        assert!(parse_points("# nothing\n", "pts.txt").is_err());
        assert!(parse_points("nan 1\n", "pts.txt").is_err());
    }

    #[test]
    fn matrix_csv() {
        let text = ",a,b,c\na,0,1,2\nb,1,0,3\nc,2,3,0\n";
        let (g, d) = parse_matrix_csv(text, "m.csv").unwrap();
        assert_eq!(g.names(), &["a", "b", "c"]);
        assert_eq!(d.get(2, 1), 3.0);
        let again = parse_matrix_csv(&format_matrix_csv(&g, &d), "m.csv").unwrap();
        assert_eq!(again, (g, d));
    }

    #[test]
    fn matrix_csv_errors() {
        let err = parse_matrix_csv(",a,b\na,0,1\nb,2,0\n", "m.csv").unwrap_err();
        assert_eq!(
            err.to_string(),
            "m.csv:2: matrix not symmetric: (a, b) = 1 but (b, a) = 2"
        );
        let err = parse_matrix_csv(",a,b\nb,0,1\na,1,0\n", "m.csv").unwrap_err();
        assert!(err.to_string().contains("expected row label 'a'"), "{err}");
        let err = parse_matrix_csv(",a,b\na,0,1\n", "m.csv").unwrap_err();
        assert!(err.to_string().contains("expected 2 matrix rows"), "{err}");
        let err = parse_matrix_csv(",a,b\na,0,x\nb,1,0\n", "m.csv").unwrap_err();
        assert!(err.to_string().starts_with("m.csv:2:"), "{err}");
        assert!(parse_matrix_csv(",a,a\na,0,1\na,1,0\n", "m.csv").is_err());
    }

    proptest! {
        #[test]
        fn points_round_trip(rows in (1usize..5).prop_flat_map(|d| {
            proptest::collection::vec(proptest::collection::vec(-1e6f64..1e6, d), 1..20)
        })) {
            let p = PointSet::from_rows(&rows).unwrap();
            prop_assert_eq!(parse_points(&format_points(&p), "x").unwrap(), p);
        }
    }
}
