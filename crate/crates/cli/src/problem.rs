//! Line-oriented input files.
//!
//! A problem file:
//!
//! ```text
//! # Kronecker quiver K(2)
//! vertices 2
//! arrow 0 1
//! arrow 0 1
//! dim 1 1
//! theta 1 0
//! q 2 3          # optional: fields used by `verify`-style runs
//! budget-reps 1000000
//! budget-subspaces 100000
//! ```
//!
//! `vertices` comes first; `dim` and `theta` are required; everything else
//! is optional. Keys may not repeat, except `arrow`.
//!
//! A representation literal has one line per arrow, in the order the arrows
//! were declared, holding the row-major entries of the `d_t x d_s` matrix as
//! field element indices. A matrix with no entries is written `-`.

use std::fmt;

use hnquiver_core::{Budgets, Character, DimVector, Elem, FieldTable, PrimePower, Quiver, Representation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub quiver: Quiver,
    pub dims: DimVector,
    pub theta: Character,
    pub qs: Option<Vec<PrimePower>>,
    pub budgets: Budgets,
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = line.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn numbers<T: std::str::FromStr>(line: usize, key: &str, words: &[&str]) -> Result<Vec<T>, ParseError> {
    words
        .iter()
        .map(|w| {
            w.parse::<T>()
                .map_err(|_| ParseError::at(line, format!("`{key}`: cannot parse `{w}`")))
        })
        .collect()
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let mut vertices: Option<usize> = None;
    let mut arrows = Vec::new();
    let mut dims: Option<Vec<usize>> = None;
    let mut theta: Option<Vec<i64>> = None;
    let mut qs: Option<Vec<PrimePower>> = None;
    let mut budgets = Budgets::default();
    let mut seen_reps = false;
    let mut seen_subspaces = false;

    for (line, words) in content_lines(text) {
        let (key, args) = (words[0], &words[1..]);
        if key != "vertices" && vertices.is_none() {
            return Err(ParseError::at(line, format!("`{key}` before `vertices`")));
        }
        let n = vertices.unwrap_or(0);
        let single = |what: &str| -> Result<u64, ParseError> {
            match args {
                [x] => x
                    .parse::<u64>()
                    .map_err(|_| ParseError::at(line, format!("`{what}`: cannot parse `{x}`"))),
                _ => Err(ParseError::at(line, format!("`{what}` takes one argument"))),
            }
        };
        match key {
            "vertices" => {
                if vertices.is_some() {
                    return Err(ParseError::at(line, "duplicate `vertices`"));
                }
                let v = single("vertices")? as usize;
                if v == 0 {
                    return Err(ParseError::at(line, "a quiver needs at least one vertex"));
                }
                vertices = Some(v);
            }
            "arrow" => {
                let ends: Vec<usize> = numbers(line, key, args)?;
                let [s, t] = ends[..] else {
                    return Err(ParseError::at(line, "`arrow` takes a source and a target"));
                };
                if s >= n || t >= n {
                    return Err(ParseError::at(
                        line,
                        format!("arrow {s} -> {t} leaves the vertex range 0..{n}"),
                    ));
                }
                arrows.push((s, t));
            }
            "dim" | "theta" => {
                if args.len() != n {
                    return Err(ParseError::at(
                        line,
                        format!("`{key}` needs {n} entries, got {}", args.len()),
                    ));
                }
                if key == "dim" {
                    if dims.is_some() {
                        return Err(ParseError::at(line, "duplicate `dim`"));
                    }
                    dims = Some(numbers(line, key, args)?);
                } else {
                    if theta.is_some() {
                        return Err(ParseError::at(line, "duplicate `theta`"));
                    }
                    theta = Some(numbers(line, key, args)?);
                }
            }
            "q" => {
                if qs.is_some() {
                    return Err(ParseError::at(line, "duplicate `q`"));
                }
                if args.is_empty() {
                    return Err(ParseError::at(line, "`q` needs at least one field size"));
                }
                let list = numbers::<u64>(line, key, args)?
                    .into_iter()
                    .map(|q| PrimePower::new(q).map_err(|e| ParseError::at(line, e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                qs = Some(list);
            }
            "budget-reps" => {
                if std::mem::replace(&mut seen_reps, true) {
                    return Err(ParseError::at(line, "duplicate `budget-reps`"));
                }
                budgets.reps = single(key)?;
            }
            "budget-subspaces" => {
                if std::mem::replace(&mut seen_subspaces, true) {
                    return Err(ParseError::at(line, "duplicate `budget-subspaces`"));
                }
                budgets.subspace_tuples = single(key)?;
            }
            other => return Err(ParseError::at(line, format!("unknown key `{other}`"))),
        }
    }

    let n = vertices.ok_or_else(|| ParseError::global("missing `vertices`"))?;
    let dims = dims.ok_or_else(|| ParseError::global("missing `dim`"))?;
    let theta = theta.ok_or_else(|| ParseError::global("missing `theta`"))?;
    let quiver = Quiver::new(n, arrows).map_err(|e| ParseError::global(e.to_string()))?;
    Ok(ProblemFile {
        quiver,
        dims: DimVector::new(dims),
        theta: Character::new(theta),
        qs,
        budgets,
    })
}

/// Parses a representation literal for `dims` over `field`.
pub fn parse_rep_literal<'a>(
    text: &str,
    quiver: &'a Quiver,
    dims: &DimVector,
    field: &'a FieldTable,
) -> Result<Representation<'a>, ParseError> {
    let lines: Vec<(usize, Vec<&str>)> = content_lines(text).collect();
    let arrows = quiver.arrows();
    if lines.len() != arrows.len() {
        return Err(ParseError::global(format!(
            "expected {} matrix lines, found {}",
            arrows.len(),
            lines.len()
        )));
    }
    let mut entries = Vec::with_capacity(arrows.len());
    for ((line, words), &(s, t)) in lines.iter().zip(arrows) {
        let want = dims[s] * dims[t];
        let row: Vec<Elem> = if words.as_slice() == ["-"] {
            Vec::new()
        } else {
            words
                .iter()
                .map(|w| match w.parse::<usize>() {
                    Ok(x) if x < field.q() => Ok(x as Elem),
                    _ => Err(ParseError::at(*line, format!("`{w}` is not an element of F_{}", field.q()))),
                })
                .collect::<Result<_, _>>()?
        };
        if row.len() != want {
            return Err(ParseError::at(
                *line,
                format!("arrow {s} -> {t} needs {want} entries, got {}", row.len()),
            ));
        }
        entries.push(row);
    }
    Representation::from_entries(quiver, field, dims.clone(), entries)
        .map_err(|e| ParseError::global(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const K2: &str = "vertices 2\narrow 0 1\narrow 0 1\ndim 1 1\ntheta 1 0\n";

    #[test]
    fn kronecker_setup() {
        let p = parse_problem(K2).unwrap();
        assert_eq!(p.quiver, Quiver::kronecker(2));
        assert_eq!(p.dims, DimVector::new(vec![1, 1]));
        assert_eq!(p.theta, Character::new(vec![1, 0]));
        assert_eq!(p.qs, None);
        assert_eq!(p.budgets, Budgets::default());
    }

    #[test]
    fn optional_keys_and_comments() {
        let text = "# header\nvertices 2  # two\n\narrow 0 1\ndim 2 3\ntheta 1 0\nq 2 4\nbudget-reps 99\nbudget-subspaces 7\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.qs.unwrap().iter().map(|q| q.q()).collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(p.budgets.reps, 99);
        assert_eq!(p.budgets.subspace_tuples, 7);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = |t: &str| parse_problem(t).unwrap_err();
        assert_eq!(err("vertices 2\narrow 0 2\ndim 1 1\ntheta 1 0\n").line, Some(2));
        assert_eq!(err("vertices 2\ndim 1 1 1\ntheta 1 0\n").line, Some(2));
        assert_eq!(err("vertices 2\ndim 1 1\ntheta 1 0\ncolour red\n").line, Some(4));
        assert_eq!(err("arrow 0 1\nvertices 2\n").line, Some(1));
        assert_eq!(err("vertices 2\ndim 1 x\ntheta 1 0\n").line, Some(2));
        assert_eq!(err("vertices 2\ndim 1 1\ndim 1 1\ntheta 1 0\n").line, Some(3));
        assert_eq!(err("vertices 2\ndim 1 1\ntheta 1 0\nq 6\n").line, Some(4));
        assert_eq!(err("vertices 2\ntheta 1 0\n").line, None);
        assert_eq!(err("").line, None);
    }

    #[test]
    fn rep_literals() {
        let p = parse_problem(K2).unwrap();
        let f = FieldTable::new(3).unwrap();
        let m = parse_rep_literal("1\n2 # second arrow\n", &p.quiver, &p.dims, &f).unwrap();
        assert_eq!(m.to_literal(), "1\n2");
        assert!(parse_rep_literal("1\n", &p.quiver, &p.dims, &f).is_err());
        assert_eq!(parse_rep_literal("1\n3\n", &p.quiver, &p.dims, &f).unwrap_err().line, Some(2));
        assert_eq!(parse_rep_literal("1 1\n0\n", &p.quiver, &p.dims, &f).unwrap_err().line, Some(1));

        let d = DimVector::new(vec![0, 2]);
        let m = parse_rep_literal("-\n-\n", &p.quiver, &d, &f).unwrap();
        assert_eq!(m.to_literal(), "-\n-");
    }
}
