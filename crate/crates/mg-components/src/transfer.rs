use grid_core::{Scalar, Stencil};

use crate::{ComponentError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RestrictionKind {
    FullWeighting,
    HalfWeighting,
    Injection,
}

fn check(d: usize) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(ComponentError::UnsupportedDim(d))
    }
}

/// Restriction stencil in fine-grid offsets.
pub fn make_restriction<T: Scalar>(d: usize, kind: RestrictionKind) -> Result<Stencil<T>> {
    check(d)?;
    Ok(match kind {
        RestrictionKind::FullWeighting => Stencil::tensor(&vec![&[1.0, 2.0, 1.0][..]; d], 0.25f64.powi(d as i32)),
        RestrictionKind::Injection => Stencil::identity(d),
        RestrictionKind::HalfWeighting => {
            // centre 2d, direct neighbours 1, normalised to unit sum
            let scale = 1.0 / (4 * d) as f64;
            let mut entries = vec![([0; 3], T::from_re(2.0 * d as f64 * scale))];
            for k in 0..d {
                for s in [-1, 1] {
                    let mut o = [0; 3];
                    o[k] = s;
                    entries.push((o, T::from_re(scale)));
                }
            }
            Stencil::from_padded(d, entries)
        }
    })
}

/// Linear (bi-, tri-linear) interpolation stencil.
pub fn make_prolongation<T: Scalar>(d: usize) -> Result<Stencil<T>> {
    check(d)?;
    Ok(Stencil::tensor(&vec![&[1.0, 2.0, 1.0][..]; d], 0.5f64.powi(d as i32)))
}
