use super::avdc::Avdc;
use super::cell::CellVal;
use super::error::{AvdcError, Result};

/// A pasting diagram: a cell, or a nonempty row of diagrams pasted onto a
/// diagram below them.
#[derive(Clone, Debug)]
pub enum PastingDiagram {
    Leaf(CellVal),
    Node { tops: Vec<PastingDiagram>, bottom: Box<PastingDiagram> },
}

impl PastingDiagram {
    pub fn leaf(cell: CellVal) -> PastingDiagram {
        PastingDiagram::Leaf(cell)
    }

    pub fn node(tops: Vec<PastingDiagram>, bottom: PastingDiagram) -> PastingDiagram {
        PastingDiagram::Node { tops, bottom: Box::new(bottom) }
    }
}

/// Evaluates a pasting diagram to a single cell. By the associativity and
/// unit axioms the result does not depend on how the diagram is bracketed;
/// the axiom checker tests this on each instance rather than assuming it.
pub fn eval_pasting(k: &dyn Avdc, d: &PastingDiagram) -> Result<CellVal> {
    eval_at(k, d, &mut Vec::new())
}

fn eval_at(k: &dyn Avdc, d: &PastingDiagram, at: &mut Vec<usize>) -> Result<CellVal> {
    match d {
        PastingDiagram::Leaf(cell) => {
            if !k.cell_valid(cell) {
                return Err(AvdcError::BadDiagram {
                    path: at.clone(),
                    detail: "leaf is not a valid cell".into(),
                });
            }
            Ok(cell.clone())
        }
        PastingDiagram::Node { tops, bottom } => {
            if tops.is_empty() {
                return Err(AvdcError::BadDiagram {
                    path: at.clone(),
                    detail: "node has an empty top row".into(),
                });
            }
            let mut top_cells = Vec::with_capacity(tops.len());
            for (i, t) in tops.iter().enumerate() {
                at.push(i);
                top_cells.push(eval_at(k, t, at)?);
                at.pop();
            }
            at.push(tops.len());
            let bottom_cell = eval_at(k, bottom, at)?;
            at.pop();
            k.compose(&bottom_cell, &top_cells).map_err(|e| AvdcError::BadDiagram {
                path: at.clone(),
                detail: e.to_string(),
            })
        }
    }
}
