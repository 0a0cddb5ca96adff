use std::fmt::Write as _;

use super::universe::{DomainElement, Universe};
use crate::{Error, Result};

/// Rows `(x, y_1, …, y_k)` over a finite universe, stored column-major so
/// that per-label passes are contiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiLabeledDatabase {
    universe: Universe,
    xs: Vec<DomainElement>,
    columns: Vec<Vec<bool>>,
}

impl MultiLabeledDatabase {
    pub fn new(universe: Universe, k: usize) -> Self {
        MultiLabeledDatabase {
            universe,
            xs: Vec::new(),
            columns: vec![Vec::new(); k],
        }
    }

    /// A database without labels (`k = 0`), as consumed by sanitizers.
    pub fn unlabeled(universe: Universe, xs: Vec<DomainElement>) -> Result<Self> {
        for &x in &xs {
            universe.check(x)?;
        }
        Ok(MultiLabeledDatabase {
            universe,
            xs,
            columns: Vec::new(),
        })
    }

    pub fn from_rows<I, L>(universe: Universe, k: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DomainElement, L)>,
        L: AsRef<[bool]>,
    {
        let mut db = Self::new(universe, k);
        for (x, labels) in rows {
            db.push_row(x, labels.as_ref())?;
        }
        Ok(db)
    }

    pub fn push_row(&mut self, x: DomainElement, labels: &[bool]) -> Result<()> {
        self.universe.check(x)?;
        if labels.len() != self.k() {
            return Err(Error::LabelCountMismatch {
                row: self.xs.len(),
                found: labels.len(),
                expected: self.k(),
            });
        }
        self.xs.push(x);
        for (col, &y) in self.columns.iter_mut().zip(labels) {
            col.push(y);
        }
        Ok(())
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn x(&self, row: usize) -> DomainElement {
        self.xs[row]
    }

    pub fn elements(&self) -> &[DomainElement] {
        &self.xs
    }

    pub fn label(&self, row: usize, j: usize) -> bool {
        self.columns[j][row]
    }

    pub fn column(&self, j: usize) -> &[bool] {
        &self.columns[j]
    }

    pub fn row_labels(&self, row: usize) -> Vec<bool> {
        self.columns.iter().map(|c| c[row]).collect()
    }

    pub fn view(&self, j: usize) -> Result<LabeledView<'_>> {
        if j >= self.k() {
            return Err(Error::LabelOutOfRange { index: j, k: self.k() });
        }
        Ok(LabeledView { db: self, j })
    }

    /// The unlabeled portion `D = (x_1, …, x_n)`.
    pub fn unlabeled_view(&self) -> MultiLabeledDatabase {
        MultiLabeledDatabase {
            universe: self.universe,
            xs: self.xs.clone(),
            columns: Vec::new(),
        }
    }

    /// Multiplicity of every universe element.
    pub fn histogram(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.universe.size() as usize];
        for x in &self.xs {
            counts[x.index() as usize] += 1;
        }
        counts
    }

    /// Rows `indices` (repetition allowed) in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> MultiLabeledDatabase {
        MultiLabeledDatabase {
            universe: self.universe,
            xs: indices.iter().map(|&i| self.xs[i]).collect(),
            columns: self
                .columns
                .iter()
                .map(|c| indices.iter().map(|&i| c[i]).collect())
                .collect(),
        }
    }

    /// Reorders label columns so that new column `j` is old column `perm[j]`.
    pub fn permute_labels(&self, perm: &[usize]) -> Result<MultiLabeledDatabase> {
        let mut seen = vec![false; self.k()];
        if perm.len() != self.k() {
            return Err(Error::Unsupported("permutation length differs from k".into()));
        }
        for &p in perm {
            if p >= self.k() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Unsupported("not a permutation of the label columns".into()));
            }
        }
        Ok(MultiLabeledDatabase {
            universe: self.universe,
            xs: self.xs.clone(),
            columns: perm.iter().map(|&p| self.columns[p].clone()).collect(),
        })
    }

    /// Serializes to the text fixture format:
    /// a `# universe=<size> k=<k>` header, then one `x y1 … yk` row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# universe={} k={}\n", self.universe.size(), self.k());
        for i in 0..self.n() {
            let _ = write!(out, "{}", self.xs[i]);
            for c in &self.columns {
                out.push_str(if c[i] { " 1" } else { " 0" });
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text fixture format. The universe is indexed unless its size
    /// is a power of two and `bit_vectors` is set.
    pub fn parse_text(text: &str, bit_vectors: bool) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let header = header
            .strip_prefix('#')
            .ok_or_else(|| parse_err(hline, "header must start with `#`".into()))?;
        let (mut size, mut k) = (None, None);
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("universe", v)) => size = v.parse::<u32>().ok(),
                Some(("k", v)) => k = v.parse::<usize>().ok(),
                _ => return Err(parse_err(hline, format!("unexpected header field `{field}`"))),
            }
        }
        let size = size.ok_or_else(|| parse_err(hline, "header lacks universe=<size>".into()))?;
        let k = k.ok_or_else(|| parse_err(hline, "header lacks k=<k>".into()))?;
        let universe = if bit_vectors {
            if !size.is_power_of_two() {
                return Err(parse_err(hline, format!("size {size} is not a power of two")));
            }
            Universe::bit_vectors(size.trailing_zeros())?
        } else {
            Universe::indexed(size)?
        };
        let mut db = Self::new(universe, k);
        for (line, row) in lines {
            if row.starts_with('#') {
                continue;
            }
            let mut fields = row.split_whitespace();
            let x: u32 = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| parse_err(line, "bad element".into()))?;
            let labels = fields
                .map(|f| match f {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(parse_err(line, format!("label `{other}` is not 0/1"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            let x = universe.element(x).map_err(|e| parse_err(line, e.to_string()))?;
            db.push_row(x, &labels).map_err(|e| parse_err(line, e.to_string()))?;
        }
        Ok(db)
    }
}

/// `S|_j`: the examples of a database paired with their `j`-th label.
#[derive(Debug, Clone, Copy)]
pub struct LabeledView<'a> {
    db: &'a MultiLabeledDatabase,
    j: usize,
}

impl<'a> LabeledView<'a> {
    pub fn label_index(&self) -> usize {
        self.j
    }

    pub fn database(&self) -> &'a MultiLabeledDatabase {
        self.db
    }

    pub fn len(&self) -> usize {
        self.db.n()
    }

    pub fn is_empty(&self) -> bool {
        self.db.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (DomainElement, bool)> + 'a {
        self.db.xs.iter().copied().zip(self.db.columns[self.j].iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MultiLabeledDatabase {
        let u = Universe::indexed(4).unwrap();
        MultiLabeledDatabase::from_rows(
            u,
            2,
            [
                (DomainElement::new(0), [true, false]),
                (DomainElement::new(3), [false, false]),
                (DomainElement::new(1), [true, true]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_ragged_rows_and_bad_elements() {
        let u = Universe::indexed(4).unwrap();
        let mut db = MultiLabeledDatabase::new(u, 2);
        assert!(matches!(
            db.push_row(DomainElement::new(0), &[true]),
            Err(Error::LabelCountMismatch { .. })
        ));
        assert!(db.push_row(DomainElement::new(4), &[true, true]).is_err());
        assert!(db.view(2).is_err());
    }

    #[test]
    fn text_format_round_trips() {
        let db = sample();
        let text = db.to_text();
        assert!(text.starts_with("# universe=4 k=2\n0 1 0\n"));
        assert_eq!(MultiLabeledDatabase::parse_text(&text, false).unwrap(), db);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = MultiLabeledDatabase::parse_text("# universe=4 k=1\n0 1\n7 0\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = MultiLabeledDatabase::parse_text("# universe=4 k=1\n0 2\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn permute_and_select() {
        let db = sample();
        let p = db.permute_labels(&[1, 0]).unwrap();
        assert_eq!(p.column(0), db.column(1));
        assert!(db.permute_labels(&[0, 0]).is_err());
        let s = db.select_rows(&[2, 2]);
        assert_eq!(s.n(), 2);
        assert_eq!(s.row_labels(1), vec![true, true]);
        assert_eq!(db.histogram(), vec![1, 1, 0, 1]);
    }
}
