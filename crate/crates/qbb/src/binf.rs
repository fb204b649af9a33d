//! The crystal `B(∞)` of `U_q^-(g)` and the crystals `B(λ)` of `V(λ)`.

use std::sync::Arc;

use crate::cartan::{BorcherdsCartanDatum, Weight};
use crate::hwmod::HWModule;
use crate::lattice::CrystalBasis;
use crate::strings::StringEngine;
use crate::uqminus::UqMinus;
use crate::Result;

pub type BInfinity = CrystalBasis<UqMinus>;
pub type BLambda = CrystalBasis<HWModule>;

pub fn build_binf(datum: BorcherdsCartanDatum, max_height: u32, word_cap: usize) -> Result<BInfinity> {
    let u = Arc::new(UqMinus::new(datum, word_cap));
    CrystalBasis::build(Arc::new(StringEngine::new(u)), max_height)
}

pub fn build_crystal_lambda(
    datum: BorcherdsCartanDatum,
    lambda: Weight,
    max_height: u32,
    word_cap: usize,
) -> Result<BLambda> {
    let v = Arc::new(HWModule::new(datum, lambda, word_cap)?);
    CrystalBasis::build(Arc::new(StringEngine::new(v)), max_height)
}
