//! Restriction of an arrangement to one of its hyperplanes, by solving the
//! hyperplane equation for a pivot coordinate.

use crate::exactfield::Field;
use crate::linalg::dot;

pub type Row<F> = (Vec<F>, F);

/// Coordinates on the hyperplane `normal · x = offset` obtained by dropping
/// the pivot coordinate.
#[derive(Clone, Debug)]
pub struct Chart<F> {
    pub pivot: usize,
    pub normal: Vec<F>,
    pub offset: F,
}

impl<F: Field> Chart<F> {
    pub fn new(h: &Row<F>) -> Option<Self> {
        let pivot = h.0.iter().position(|c| !c.is_zero())?;
        Some(Chart {
            pivot,
            normal: h.0.clone(),
            offset: h.1.clone(),
        })
    }

    /// Point of the hyperplane with the given chart coordinates.
    pub fn lift(&self, y: &[F]) -> Vec<F> {
        let c = self.pivot;
        let inv = self.normal[c].inverse().expect("pivot is nonzero");
        let mut rest = self.offset.clone();
        let mut x = Vec::with_capacity(y.len() + 1);
        for (i, yi) in y.iter().enumerate() {
            let idx = if i < c { i } else { i + 1 };
            rest = rest.minus(&self.normal[idx].times(yi));
        }
        x.extend_from_slice(&y[..c]);
        x.push(rest.times(&inv));
        x.extend_from_slice(&y[c..]);
        x
    }

    /// The trace of `row` on the hyperplane, or `None` if its normal
    /// vanishes there (parallel hyperplanes).
    pub fn restrict(&self, row: &Row<F>) -> Option<Row<F>> {
        let c = self.pivot;
        let ratio = row.0[c].times(&self.normal[c].inverse().expect("pivot is nonzero"));
        let normal: Vec<F> = (0..row.0.len())
            .filter(|&i| i != c)
            .map(|i| row.0[i].minus(&ratio.times(&self.normal[i])))
            .collect();
        if normal.iter().all(Field::is_zero) {
            return None;
        }
        Some((normal, row.1.minus(&ratio.times(&self.offset))))
    }
}

pub fn evaluate<F: Field>(row: &Row<F>, x: &[F]) -> F {
    dot(&row.0, x, &row.1.zero_like()).minus(&row.1)
}

/// Scales so the first nonzero normal coordinate is one.
pub fn normalize<F: Field>(row: &Row<F>) -> Option<Row<F>> {
    let lead = row.0.iter().find(|c| !c.is_zero())?;
    let inv = lead.inverse().ok()?;
    Some((
        row.0.iter().map(|c| c.times(&inv)).collect(),
        row.1.times(&inv),
    ))
}

/// Restricts `others` to `h`, dropping parallel traces and duplicates.
pub fn restrict_all<F: Field>(others: &[Row<F>], h: &Row<F>) -> Option<(Vec<Row<F>>, Chart<F>)> {
    let chart = Chart::new(h)?;
    let mut out: Vec<Row<F>> = Vec::new();
    for r in others {
        if let Some(n) = chart.restrict(r).as_ref().and_then(normalize) {
            if !out.contains(&n) {
                out.push(n);
            }
        }
    }
    out.sort();
    Some((out, chart))
}
