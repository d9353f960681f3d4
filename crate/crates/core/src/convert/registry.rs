use std::collections::BTreeMap;
use std::sync::Arc;

use super::ops;
use super::ConversionParams;
use crate::emotion_set::EmotionSet;
use crate::error::{Error, Result};
use crate::grid::GridGeometry;
use crate::state::{EmotionState, Kind};

/// Side inputs a conversion may need: the target emotion set for `-> ces`
/// and the grid geometry for `-> ddes`.
#[derive(Debug, Clone, Default)]
pub struct ConversionTarget {
    pub set: Option<Arc<EmotionSet>>,
    pub geometry: GridGeometry,
}

impl ConversionTarget {
    pub fn with_set(set: Arc<EmotionSet>) -> Self {
        Self {
            set: Some(set),
            ..Default::default()
        }
    }

    fn require_set(&self) -> Result<Arc<EmotionSet>> {
        self.set
            .clone()
            .ok_or_else(|| Error::Format("conversion to ces needs a target emotion set".into()))
    }
}

/// One representation-to-representation conversion.
pub trait Converter: Send + Sync {
    fn source(&self) -> Kind;
    fn target(&self) -> Kind;

    fn name(&self) -> String {
        format!("{}->{}", self.source(), self.target())
    }

    fn convert(
        &self,
        input: &EmotionState,
        target: &ConversionTarget,
        params: &ConversionParams,
    ) -> Result<EmotionState>;
}

fn kind_error(expected: Kind, got: &EmotionState) -> Error {
    Error::Format(format!("expected {expected} input, got {}", got.kind()))
}

macro_rules! converter {
    ($name:ident, $from:expr, $to:expr, |$input:ident : $variant:ident, $target:ident, $params:ident| $body:expr) => {
        pub struct $name;

        impl Converter for $name {
            fn source(&self) -> Kind {
                $from
            }

            fn target(&self) -> Kind {
                $to
            }

            fn convert(
                &self,
                input: &EmotionState,
                $target: &ConversionTarget,
                $params: &ConversionParams,
            ) -> Result<EmotionState> {
                let EmotionState::$variant($input) = input else {
                    return Err(kind_error($from, input));
                };
                let _ = (&$target, &$params);
                Ok(EmotionState::from($body?))
            }
        }
    };
}

converter!(CesToDes, Kind::Ces, Kind::Des, |s: Categorical, _t, _p| {
    Ok::<_, Error>(ops::ces_to_des(s))
});
converter!(CesToCes, Kind::Ces, Kind::Ces, |s: Categorical, t, p| {
    ops::ces_to_ces(s, t.require_set()?, p)
});
converter!(CesToDdes, Kind::Ces, Kind::Ddes, |s: Categorical, t, p| {
    ops::ces_to_ddes(s, t.geometry, p)
});
converter!(DesToCes, Kind::Des, Kind::Ces, |v: Dimensional, t, p| {
    ops::des_to_ces(v, t.require_set()?, p)
});
converter!(DesToDdes, Kind::Des, Kind::Ddes, |v: Dimensional, t, p| {
    ops::des_to_ddes(v, t.geometry, p)
});
converter!(DdesToCes, Kind::Ddes, Kind::Ces, |g: Density, t, _p| {
    ops::ddes_to_ces(g, t.require_set()?)
});
converter!(DdesToDes, Kind::Ddes, Kind::Des, |g: Density, _t, p| {
    ops::ddes_to_des(g, p)
});
converter!(SharpenDdes, Kind::Ddes, Kind::Ddes, |g: Density, _t, p| {
    ops::sharpen_grid(g, p)
});

/// Converters keyed by `(source, target)` kind.
pub struct ConverterRegistry {
    converters: BTreeMap<(Kind, Kind), Box<dyn Converter>>,
}

impl Default for ConverterRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(CesToDes));
        r.register(Box::new(CesToCes));
        r.register(Box::new(CesToDdes));
        r.register(Box::new(DesToCes));
        r.register(Box::new(DesToDdes));
        r.register(Box::new(DdesToCes));
        r.register(Box::new(DdesToDes));
        r.register(Box::new(SharpenDdes));
        r
    }
}

impl ConverterRegistry {
    pub fn empty() -> Self {
        Self {
            converters: BTreeMap::new(),
        }
    }

    /// Registers a converter, replacing any existing one for the same kinds.
    pub fn register(&mut self, c: Box<dyn Converter>) -> Option<Box<dyn Converter>> {
        self.converters.insert((c.source(), c.target()), c)
    }

    pub fn get(&self, from: Kind, to: Kind) -> Result<&dyn Converter> {
        self.converters
            .get(&(from, to))
            .map(Box::as_ref)
            .ok_or_else(|| Error::UnknownConversion {
                from: from.to_string(),
                to: to.to_string(),
            })
    }

    pub fn names(&self) -> Vec<String> {
        self.converters.values().map(|c| c.name()).collect()
    }

    /// Converts `input` to `to`; same-kind requests other than a registered
    /// one (e.g. `des -> des`) are rejected.
    pub fn convert(
        &self,
        input: &EmotionState,
        to: Kind,
        target: &ConversionTarget,
        params: &ConversionParams,
    ) -> Result<EmotionState> {
        self.get(input.kind(), to)?.convert(input, target, params)
    }
}
