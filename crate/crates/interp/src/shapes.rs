//! Interfaces assigned to types and typing contexts.

use goi_core::Shape;
use lang_ast::Type;

/// The interface of a value of type `ty`.
///
/// `Unit` has the empty interface and `Real` the stack-of-reals one. A
/// function exposes three ports, left to right: its store action, its
/// replicated result and its replicated argument with reversed polarity,
/// so the caller answers argument questions instead of asking them.
pub fn type_shape(ty: &Type) -> Shape {
    match ty {
        Type::Unit => Shape::One,
        Type::Real => Shape::Reals,
        Type::Arrow(a, b) => Shape::tensor(
            Shape::tensor(Shape::state(), Shape::bang(type_shape(b))),
            Shape::dual(Shape::bang(type_shape(a))),
        ),
    }
}

/// The interface of a typing context: the entry shapes tensored left to
/// right with left nesting, collapsing to the unit shape when empty.
pub fn ctx_shape(ctx: &typer::Context) -> Shape {
    let shapes: Vec<Shape> = ctx.entries().iter().map(|(_, t)| type_shape(t)).collect();
    nested_shape(&shapes)
}

pub(crate) fn nested_shape(shapes: &[Shape]) -> Shape {
    match shapes.split_first() {
        None => Shape::One,
        Some((first, rest)) => rest
            .iter()
            .fold(first.clone(), |acc, s| Shape::tensor(acc, s.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_types_have_flat_interfaces() {
        assert_eq!(type_shape(&Type::Unit), Shape::One);
        assert_eq!(type_shape(&Type::Real), Shape::Reals);
    }

    #[test]
    fn arrows_nest_state_result_argument() {
        let t = type_shape(&Type::arrow(Type::Real, Type::Unit));
        let expect = Shape::tensor(
            Shape::tensor(Shape::state(), Shape::bang(Shape::One)),
            Shape::dual(Shape::bang(Shape::Reals)),
        );
        assert_eq!(t, expect);
    }

    #[test]
    fn contexts_nest_to_the_left() {
        let ctx = typer::Context::empty()
            .extend("x", Type::Real)
            .extend("y", Type::Unit)
            .extend("z", Type::Real);
        let expect = Shape::tensor(
            Shape::tensor(Shape::Reals, Shape::One),
            Shape::Reals,
        );
        assert_eq!(ctx_shape(&ctx), expect);
        assert_eq!(ctx_shape(&typer::Context::empty()), Shape::One);
    }
}
