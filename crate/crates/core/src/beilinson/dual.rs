use super::PiWindow;

/// `X*(i, j) = X(-j, -i)*` on `[-hi, -lo]`, in the dual bases.
///
/// The monos of `X*` are transposed epis of `X` and vice versa, so dualizing
/// twice returns the original matrices exactly.
pub fn dualize(x: &PiWindow) -> PiWindow {
    PiWindow::from_fn(
        x.field(),
        -x.hi(),
        -x.lo(),
        |i, j| x.dim(-j, -i),
        |i, j| x.mono(-j, -i - 1).transpose(),
        |i, j| x.epi(-j - 1, -i).transpose(),
    )
    .expect("the dual of a window is a window")
}
