//! Serialization of exact integers: JSON numbers when they fit in `i64`,
//! decimal strings otherwise.

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::abelian::{GroupDescription, StationaryLimit};
use crate::matrix::Matrix;
use crate::scalar::Int;

pub(crate) struct Num<'a, T>(pub &'a T);

impl<T: Int> Serialize for Num<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub(crate) struct Nums<'a, T>(pub &'a [T]);

impl<T: Int> Serialize for Nums<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            seq.serialize_element(&Num(x))?;
        }
        seq.end()
    }
}

pub(crate) fn int<T: Int, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    Num(x).serialize(s)
}

pub(crate) fn ints<T: Int, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    Nums(v).serialize(s)
}

impl<T: Int> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows()))?;
        for i in 0..self.rows() {
            seq.serialize_element(&Nums(self.row(i)))?;
        }
        seq.end()
    }
}

impl<T: Int> Serialize for StationaryLimit<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StationaryLimit", 6)?;
        st.serialize_field("matrix", self.matrix())?;
        st.serialize_field("rank", &self.rank())?;
        st.serialize_field("basis", self.basis())?;
        st.serialize_field("reduced", self.reduced())?;
        st.serialize_field("charpoly", &Nums(self.charpoly()))?;
        st.serialize_field("abs_det", &Num(self.abs_det()))?;
        st.end()
    }
}

impl<T: Int> Serialize for GroupDescription<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GroupDescription", 8)?;
        st.serialize_field("kind", self.kind())?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("rank", &self.rank())?;
        st.serialize_field("charpoly", &Nums(&self.charpoly()))?;
        st.serialize_field("abs_det", &Num(&self.abs_det()))?;
        st.serialize_field("torsion", &Nums(&self.torsion()))?;
        match self {
            GroupDescription::Composite { quotient, .. } => st.serialize_field("quotient", quotient)?,
            _ => st.serialize_field("quotient", &Option::<()>::None)?,
        }
        match self {
            GroupDescription::StationaryLimit(g) => st.serialize_field("reduced", g.reduced())?,
            _ => st.serialize_field("reduced", &Option::<()>::None)?,
        }
        st.end()
    }
}
