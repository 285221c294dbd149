use serde::ser::{Serialize, SerializeStruct, Serializer};

/// Size and degree summary of a Laurent polynomial.
///
/// `span` (largest sum of absolute exponents over the terms) is the headline
/// growth measure; the zero polynomial reports [`DegreeStats::Empty`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeStats {
    Empty,
    Nonempty {
        term_count: usize,
        max_total_degree: i64,
        min_total_degree: i64,
        span: i64,
    },
}

impl DegreeStats {
    pub fn span(&self) -> Option<i64> {
        match self {
            DegreeStats::Empty => None,
            DegreeStats::Nonempty { span, .. } => Some(*span),
        }
    }

    pub fn term_count(&self) -> usize {
        match self {
            DegreeStats::Empty => 0,
            DegreeStats::Nonempty { term_count, .. } => *term_count,
        }
    }

    pub fn max_total_degree(&self) -> Option<i64> {
        match self {
            DegreeStats::Empty => None,
            DegreeStats::Nonempty { max_total_degree, .. } => Some(*max_total_degree),
        }
    }
}

impl Serialize for DegreeStats {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DegreeStats::Empty => s.serialize_str("empty"),
            DegreeStats::Nonempty {
                term_count,
                max_total_degree,
                min_total_degree,
                span,
            } => {
                let mut st = s.serialize_struct("DegreeStats", 4)?;
                st.serialize_field("term_count", term_count)?;
                st.serialize_field("max_total_degree", max_total_degree)?;
                st.serialize_field("min_total_degree", min_total_degree)?;
                st.serialize_field("span", span)?;
                st.end()
            }
        }
    }
}
