//! Functors, natural transformations and monads over the finite carrier
//! universe, with their laws as executable checks.

pub mod functor;
pub mod monad;
pub mod nat;

pub use functor::{compose_functors, Functor};
pub use monad::{
    fmap, join, map_fn, monad_from_ret_bind, monad_functor, mty, obs_equal, ret_fn, Monad, MonadDef,
    MonadRef,
};
pub use nat::{check_naturality, functor_apply_nt, vcomp, NatTrans};
