//! Monad morphisms, monad transformers with `Lift`, and functorial
//! transformers with `Hmap`.

pub mod laws;
pub mod morphism;
pub mod stacks;

use std::rc::Rc;

pub use morphism::{morphism_bind_law, morphism_ret_law, MonadMorphism};
pub use stacks::{ContT, EnvT, ExceptT, Functorial, IdentityT, OutputT, StateT, Transformer, TransformerRef};

use crate::codensity::CodensityT;
use crate::config::Mutant;
use crate::models::monads::Params;

/// Registry names of the transformers.
pub const TRANSFORMERS: [&str; 6] = ["stateT", "exceptT", "envT", "outputT", "contT", "codensityT"];

/// The functorial ones.
pub const FMTS: [&str; 4] = ["stateT", "exceptT", "envT", "outputT"];

pub fn transformer(name: &str, p: &Params, mutant: Option<Mutant>) -> Option<TransformerRef> {
    let t: TransformerRef = match name {
        "stateT" => Rc::new(StateT { s: p.s.clone() }),
        "exceptT" => Rc::new(ExceptT { z: p.z.clone(), mutant }),
        "envT" => Rc::new(EnvT { e: p.e.clone() }),
        "outputT" => Rc::new(OutputT),
        "contT" => Rc::new(ContT { r: p.r.clone() }),
        "codensityT" => Rc::new(CodensityT),
        "identityT" => Rc::new(IdentityT),
        _ => return None,
    };
    Some(t)
}
