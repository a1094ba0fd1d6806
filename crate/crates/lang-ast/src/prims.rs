// Primitive function registry.
//
// Primitives are total maps on reals, identified by index. The builtin set
// is fixed; embedders can register more before parsing.

use std::collections::HashMap;

use crate::ast::PrimId;

#[derive(Clone)]
pub struct PrimDef {
    pub name: String,
    pub arity: usize,
    pub fun: fn(&[f64]) -> f64,
}

impl std::fmt::Debug for PrimDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimDef")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub struct PrimRegistry {
    defs: Vec<PrimDef>,
    by_name: HashMap<String, PrimId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("primitive {0} is already registered")]
pub struct DuplicatePrim(pub String);

impl PrimRegistry {
    pub fn empty() -> Self {
        PrimRegistry {
            defs: Vec::new(),
            by_name: HashMap::new(),
        }
    }

    /// The builtin primitives: add, sub, mul, neg, abs, exp, log, lt, min, max.
    pub fn builtin() -> Self {
        let mut reg = PrimRegistry::empty();
        let defs: &[(&str, usize, fn(&[f64]) -> f64)] = &[
            ("add", 2, |a| a[0] + a[1]),
            ("sub", 2, |a| a[0] - a[1]),
            ("mul", 2, |a| a[0] * a[1]),
            ("neg", 1, |a| -a[0]),
            ("abs", 1, |a| a[0].abs()),
            ("exp", 1, |a| a[0].exp()),
            // log of a nonpositive argument is NaN, including zero.
            ("log", 1, |a| if a[0] > 0.0 { a[0].ln() } else { f64::NAN }),
            // Comparison encodes truth as 0.0, matching the zero-tested `if`.
            ("lt", 2, |a| if a[0] < a[1] { 0.0 } else { 1.0 }),
            ("min", 2, |a| a[0].min(a[1])),
            ("max", 2, |a| a[0].max(a[1])),
        ];
        for (name, arity, fun) in defs {
            reg.register(PrimDef {
                name: (*name).to_string(),
                arity: *arity,
                fun: *fun,
            })
            .expect("builtin names are distinct");
        }
        reg
    }

    pub fn register(&mut self, def: PrimDef) -> Result<PrimId, DuplicatePrim> {
        if self.by_name.contains_key(&def.name) {
            return Err(DuplicatePrim(def.name));
        }
        let id = PrimId(self.defs.len());
        self.by_name.insert(def.name.clone(), id);
        self.defs.push(def);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<PrimId> {
        self.by_name.get(name).copied()
    }

    pub fn def(&self, id: PrimId) -> &PrimDef {
        &self.defs[id.0]
    }

    pub fn apply(&self, id: PrimId, args: &[f64]) -> f64 {
        let def = self.def(id);
        debug_assert_eq!(args.len(), def.arity, "arity checked by the typer");
        (def.fun)(args)
    }
}
