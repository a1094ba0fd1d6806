//! Compilation of well typed terms into token machines.
//!
//! A term `x1:A1, .., xn:An |- M : B` becomes a machine from the
//! replicated context interface to `S (x) !B` where `S` is the store
//! action: the caller first routes a weighted store through the left
//! port (running all effects) and afterwards reads replicated copies of
//! the result on the right port. A value `|- V : A` becomes a machine
//! straight into the value interface of `A`, with no store port.
//!
//! Every composite is assembled from the small machine and rewiring
//! vocabulary of `goi-core`/`goi-machines`; compilation also records a
//! graph of the assembled network keyed by term paths, for rendering.

use std::sync::{Arc, Mutex};

use goi_core::{
    assoc, assoc_inv, bang, bang_merge, bang_split, compose, contraction, counit_link,
    dereliction, digging, identity, lunitor, lunitor_inv, pad, retag_dom, runitor, runitor_inv,
    symmetry, tensor, unit_link, weakening, Machine, NetGraph, Shape, DEFAULT_FUEL,
};
use goi_machines::{
    cond, fn_machine, real_const, sample_machine, sample_machine_rng, score_machine, state_mult,
    state_shape, state_unit,
};
use lang_ast::{PrimRegistry, Term, TermKind, Type, Value, ValueKind};
use rand_chacha::ChaCha8Rng;
use typer::{check_closed_real, infer_type, infer_value, Context, TypeError};

use crate::shapes::{ctx_shape, nested_shape, type_shape};

/// Where `sample` takes its randomness from.
#[derive(Clone)]
pub enum SampleMode {
    /// Pop the head of the store's trace; an empty trace blocks.
    Trace,
    /// Draw from a shared generator and pass the trace through untouched.
    Stream(Arc<Mutex<ChaCha8Rng>>),
}

/// Compilation knobs.
#[derive(Clone)]
pub struct CompileOptions {
    /// Bounce budget for every internal composition node.
    pub fuel: u64,
    pub mode: SampleMode,
    /// Replace each recursive definition by its k-th finite unrolling
    /// instead of a feedback loop.
    pub iterants: Option<u32>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            fuel: DEFAULT_FUEL,
            mode: SampleMode::Trace,
            iterants: None,
        }
    }
}

/// A compiled program together with its network diagram.
pub struct Compiled {
    /// Runs from the empty interface to `S (x) !Real`.
    pub machine: Machine,
    pub graph: NetGraph,
    pub ty: Type,
}

/// Compile a closed program of type `Real`.
pub fn compile_program(
    reg: &PrimRegistry,
    t: &Term,
    opt: &CompileOptions,
) -> Result<Compiled, TypeError> {
    check_closed_real(reg, t)?;
    let mut c = Compiler {
        reg,
        opt,
        graph: NetGraph::new(),
    };
    let (m, ty) = c.term(&Context::empty(), t, "t");
    // The replicated empty context carries no tokens in either
    // direction, so the domain can be retagged away entirely.
    let m = retag_dom(&m);
    assert_eq!(m.dom, Shape::One, "program domain did not close");
    assert_eq!(
        m.cod,
        Shape::tensor(state_shape(), Shape::bang(Shape::Reals)),
        "program interface is not a store action over replicated reals",
    );
    Ok(Compiled {
        machine: m,
        graph: c.graph,
        ty,
    })
}

/// Compile an open term. Type checks first so that malformed input is
/// reported as an error rather than unwound from inside the compiler.
pub fn interp_term(
    reg: &PrimRegistry,
    ctx: &Context,
    t: &Term,
    opt: &CompileOptions,
) -> Result<(Machine, Type), TypeError> {
    infer_type(reg, ctx, t)?;
    let mut c = Compiler {
        reg,
        opt,
        graph: NetGraph::new(),
    };
    Ok(c.term(ctx, t, "t"))
}

/// Compile an open value to its value interface.
pub fn interp_value(
    reg: &PrimRegistry,
    ctx: &Context,
    v: &Value,
    opt: &CompileOptions,
) -> Result<(Machine, Type), TypeError> {
    infer_value(reg, ctx, v)?;
    let mut c = Compiler {
        reg,
        opt,
        graph: NetGraph::new(),
    };
    Ok(c.value(ctx, v, "v"))
}

struct Compiler<'a> {
    reg: &'a PrimRegistry,
    opt: &'a CompileOptions,
    graph: NetGraph,
}

impl Compiler<'_> {
    fn fuel(&self) -> u64 {
        self.opt.fuel
    }

    fn chain(&self, first: Machine, rest: impl IntoIterator<Item = Machine>) -> Machine {
        rest.into_iter()
            .fold(first, |acc, m| compose(&acc, &m, self.fuel()))
    }

    fn node(&mut self, path: &str, label: &str) {
        self.graph.add_node(path, label);
    }

    fn edge(&mut self, parent: &str, child: &str, label: &str) {
        self.graph.add_edge(parent, child, label);
    }

    /// Merge a banged entry into a banged context, `!D (x) !A` into the
    /// replicated interface of the extended context. A singleton context
    /// is the entry itself, so an empty left factor is dropped rather
    /// than merged.
    fn merge_entry(&self, outer: &Context, a: &Shape) -> Machine {
        let d = ctx_shape(outer);
        let ba = Shape::bang(a.clone());
        if outer.entries().is_empty() {
            self.chain(
                tensor(&weakening(d), &identity(ba.clone())),
                [lunitor(ba)],
            )
        } else {
            bang_merge(d, a.clone())
        }
    }

    /// Wrap a value network into the term discipline: a fresh store
    /// action on the left, the replicated value on the right.
    fn promote(&self, d: &Shape, psi: &Machine) -> Machine {
        let replicated = compose(&digging(d.clone()), &bang(psi), self.fuel());
        compose(
            &lunitor_inv(Shape::bang(d.clone())),
            &tensor(&state_unit(), &replicated),
            self.fuel(),
        )
    }

    fn term(&mut self, ctx: &Context, t: &Term, path: &str) -> (Machine, Type) {
        let d = ctx_shape(ctx);
        let bd = Shape::bang(d.clone());
        let s = state_shape();
        let (m, ty) = match &t.node {
            TermKind::Val(v) => {
                self.node(path, "e");
                let child = format!("{path}.val");
                self.edge(path, &child, "of");
                let (psi, ty) = self.value(ctx, v, &child);
                (self.promote(&d, &psi), ty)
            }
            TermKind::App(v, w) => {
                self.node(path, "app");
                let fun_p = format!("{path}.fun");
                let arg_p = format!("{path}.arg");
                self.edge(path, &fun_p, "fun");
                self.edge(path, &arg_p, "arg");
                let (psi_v, fun_ty) = self.value(ctx, v, &fun_p);
                let (psi_w, _) = self.value(ctx, w, &arg_p);
                let (a_ty, b_ty) = match fun_ty {
                    Type::Arrow(a, b) => (*a, *b),
                    _ => unreachable!("application head was checked to be a function"),
                };
                let ba = Shape::bang(type_shape(&a_ty));
                let sb = Shape::tensor(s.clone(), Shape::bang(type_shape(&b_ty)));
                // Replicate the argument and feed it to the function's
                // reversed argument port through a counit link.
                let arg_net = compose(&digging(d.clone()), &bang(&psi_w), self.fuel());
                let m = self.chain(
                    contraction(d.clone()),
                    [
                        tensor(&psi_v, &arg_net),
                        assoc(sb.clone(), Shape::dual(ba.clone()), ba.clone()),
                        tensor(&identity(sb.clone()), &counit_link(ba)),
                        runitor(sb),
                    ],
                );
                (m, b_ty)
            }
            TermKind::Let { var, bound, body } => {
                self.node(path, "m");
                let bound_p = format!("{path}.bound");
                let body_p = format!("{path}.body");
                self.edge(path, &bound_p, "bind");
                self.edge(path, &body_p, "in");
                let (m1, a_ty) = self.term(ctx, bound, &bound_p);
                let inner = ctx.extend(var, a_ty.clone());
                let (m2, b_ty) = self.term(&inner, body, &body_p);
                let a = type_shape(&a_ty);
                let ba = Shape::bang(a.clone());
                let bb = Shape::bang(type_shape(&b_ty));
                let n2 = compose(&self.merge_entry(ctx, &a), &m2, self.fuel());
                // The multiplication runs its second store factor first,
                // so the bound term's action is swapped into that slot.
                let m = self.chain(
                    contraction(d.clone()),
                    [
                        tensor(&m1, &identity(bd.clone())),
                        assoc(s.clone(), ba.clone(), bd.clone()),
                        tensor(&identity(s.clone()), &symmetry(ba, bd.clone())),
                        tensor(&identity(s.clone()), &n2),
                        assoc_inv(s.clone(), s.clone(), bb.clone()),
                        tensor(&symmetry(s.clone(), s.clone()), &identity(bb.clone())),
                        tensor(&state_mult(self.fuel()), &identity(bb)),
                    ],
                );
                (m, b_ty)
            }
            TermKind::If {
                guard,
                then_t,
                else_t,
            } => {
                self.node(path, "cd");
                let g_p = format!("{path}.guard");
                let t_p = format!("{path}.then");
                let e_p = format!("{path}.else");
                self.edge(path, &g_p, "guard");
                self.edge(path, &t_p, "then");
                self.edge(path, &e_p, "else");
                let (psi_g, _) = self.value(ctx, guard, &g_p);
                let (m_then, a_ty) = self.term(ctx, then_t, &t_p);
                let (m_else, _) = self.term(ctx, else_t, &e_p);
                let x = Shape::tensor(s.clone(), Shape::bang(type_shape(&a_ty)));
                let m = self.chain(
                    contraction(d.clone()),
                    [
                        tensor(&identity(bd.clone()), &contraction(d.clone())),
                        tensor(&psi_g, &tensor(&m_then, &m_else)),
                        cond(x),
                    ],
                );
                (m, a_ty)
            }
            TermKind::Prim(id, args) => {
                let def = self.reg.def(*id);
                let (name, arity, fun) = (def.name.clone(), def.arity, def.fun);
                self.node(path, &format!("fn:{name}"));
                let mut tuple: Option<Machine> = None;
                for (k, arg) in args.iter().enumerate() {
                    let p = format!("{path}.a{k}");
                    self.edge(path, &p, &format!("a{k}"));
                    let (psi, _) = self.value(ctx, arg, &p);
                    tuple = Some(match tuple {
                        None => psi,
                        Some(acc) => self.chain(contraction(d.clone()), [tensor(&acc, &psi)]),
                    });
                }
                let tuple = tuple.expect("primitives take at least one argument");
                let vfn = compose(&tuple, &fn_machine(arity, fun), self.fuel());
                (self.promote(&d, &vfn), Type::Real)
            }
            TermKind::Sample => {
                self.node(path, "sa");
                let sa = match &self.opt.mode {
                    SampleMode::Trace => sample_machine(),
                    SampleMode::Stream(rng) => sample_machine_rng(rng.clone()),
                };
                let out = sa.cod.clone();
                let m = self.chain(
                    runitor_inv(bd.clone()),
                    [tensor(&weakening(d.clone()), &sa), lunitor(out)],
                );
                (m, Type::Real)
            }
            TermKind::Score(v) => {
                self.node(path, "sc");
                let p = format!("{path}.of");
                self.edge(path, &p, "of");
                let (psi, _) = self.value(ctx, v, &p);
                let m = self.chain(psi, [score_machine(), pad(s.clone())]);
                (m, Type::Unit)
            }
        };
        assert_eq!(m.dom, bd, "term network domain mismatch at {path}");
        assert_eq!(
            m.cod,
            Shape::tensor(s, Shape::bang(type_shape(&ty))),
            "term network codomain mismatch at {path}",
        );
        (m, ty)
    }

    fn value(&mut self, ctx: &Context, v: &Value, path: &str) -> (Machine, Type) {
        let d = ctx_shape(ctx);
        let (m, ty) = match &v.node {
            ValueKind::Skip => {
                self.node(path, "w");
                (weakening(d.clone()), Type::Unit)
            }
            ValueKind::RealConst(a) => {
                self.node(path, &format!("r_{a}"));
                let m = compose(&weakening(d.clone()), &real_const(*a), self.fuel());
                (m, Type::Real)
            }
            ValueKind::Var(name) => {
                self.node(path, &format!("d {name}"));
                let entries = ctx.entries();
                let i = entries
                    .iter()
                    .rposition(|(n, _)| n == name)
                    .expect("variable was checked to be bound");
                let shapes: Vec<Shape> =
                    entries.iter().map(|(_, t)| type_shape(t)).collect();
                (self.project(&shapes, i), entries[i].1.clone())
            }
            ValueKind::Lam { var, ann, body } => {
                self.node(path, &format!("lam {var}"));
                let body_p = format!("{path}.body");
                self.edge(path, &body_p, "body");
                let inner = ctx.extend(var, ann.clone());
                let (mb, b_ty) = self.term(&inner, body, &body_p);
                let m = self.lam_net(ctx, ann, &mb);
                (m, Type::arrow(ann.clone(), b_ty))
            }
            ValueKind::Fix {
                f,
                x,
                dom,
                cod,
                body,
            } => {
                self.node(path, &format!("fix {f} {x}"));
                let lam_p = format!("{path}.lam");
                self.edge(path, &lam_p, "body");
                let c_ty = Type::arrow(dom.clone(), cod.clone());
                let inner = ctx.extend(f, c_ty.clone());
                let lam_v = Value::lam(x.clone(), dom.clone(), (**body).clone());
                let (psi_lam, _) = self.value(&inner, &lam_v, &lam_p);
                let k = type_shape(&c_ty);
                // One unrolling: given the context and a replicated
                // candidate for the recursive function, produce the body.
                let m0 = compose(&self.merge_entry(ctx, &k), &psi_lam, self.fuel());
                let m = match self.opt.iterants {
                    Some(n) => self.fix_iterant(&d, &k, &m0, n),
                    None => self.fix_loop(&d, &k, &m0),
                };
                (m, c_ty)
            }
        };
        assert_eq!(
            m.dom,
            Shape::bang(d),
            "value network domain mismatch at {path}",
        );
        assert_eq!(
            m.cod,
            type_shape(&ty),
            "value network codomain mismatch at {path}",
        );
        (m, ty)
    }

    /// A variable access: split the replicated context entry by entry,
    /// discard everything but the target and ask it through copy 0.
    fn project(&self, shapes: &[Shape], i: usize) -> Machine {
        let n = shapes.len();
        if n == 1 {
            return dereliction(shapes[0].clone());
        }
        let (prefix, last) = shapes.split_at(n - 1);
        let last = last[0].clone();
        let pre = nested_shape(prefix);
        let split = bang_split(pre.clone(), last.clone());
        if i == n - 1 {
            let step = tensor(&weakening(pre), &dereliction(last.clone()));
            self.chain(split, [step, lunitor(last)])
        } else {
            let rec = self.project(prefix, i);
            let target = rec.cod.clone();
            let step = tensor(&rec, &weakening(last));
            self.chain(split, [step, runitor(target)])
        }
    }

    /// Close a body network over its argument: the argument port is bent
    /// around with a unit link so the caller answers it from outside.
    fn lam_net(&self, outer: &Context, ann: &Type, mb: &Machine) -> Machine {
        let a = type_shape(ann);
        let ba = Shape::bang(a.clone());
        let dba = Shape::dual(ba.clone());
        let bd = Shape::bang(ctx_shape(outer));
        let body = compose(&self.merge_entry(outer, &a), mb, self.fuel());
        self.chain(
            runitor_inv(bd.clone()),
            [
                tensor(&identity(bd.clone()), &unit_link(ba.clone())),
                assoc_inv(bd, ba, dba.clone()),
                tensor(&body, &identity(dba)),
            ],
        )
    }

    /// The recursive knot: replicate the unrolling `m0` against itself
    /// through a unit/counit feedback loop, then take one more step.
    fn fix_loop(&self, d: &Shape, k: &Shape, m0: &Machine) -> Machine {
        let bd = Shape::bang(d.clone());
        let bk = Shape::bang(k.clone());
        let dbk = Shape::dual(bk.clone());
        // !D (x) !K |- !K (x) !K: promote the unrolling and split its copies.
        let core = self.chain(
            tensor(&digging(d.clone()), &digging(k.clone())),
            [
                bang_merge(bd.clone(), bk.clone()),
                bang(m0),
                contraction(k.clone()),
            ],
        );
        let loopnet = self.chain(
            runitor_inv(bd.clone()),
            [
                tensor(&identity(bd.clone()), &unit_link(bk.clone())),
                assoc_inv(bd.clone(), bk.clone(), dbk.clone()),
                tensor(&core, &identity(dbk.clone())),
                assoc(bk.clone(), bk.clone(), dbk.clone()),
                tensor(&identity(bk.clone()), &symmetry(bk.clone(), dbk)),
                tensor(&identity(bk.clone()), &counit_link(bk.clone())),
                runitor(bk),
            ],
        );
        self.chain(
            contraction(d.clone()),
            [tensor(&identity(bd), &loopnet), m0.clone()],
        )
    }

    /// Finite approximant: unroll the body `n` times over a network that
    /// is undefined everywhere, instead of tying the knot.
    fn fix_iterant(&self, d: &Shape, k: &Shape, m0: &Machine, n: u32) -> Machine {
        let bd = Shape::bang(d.clone());
        let mut it = Machine::undefined(bd.clone(), k.clone());
        for _ in 0..n {
            let candidate = compose(&digging(d.clone()), &bang(&it), self.fuel());
            it = self.chain(
                contraction(d.clone()),
                [tensor(&identity(bd.clone()), &candidate), m0.clone()],
            );
        }
        it
    }
}
