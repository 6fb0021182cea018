//! Block-interaction systems: `G = 1 + e·M⁻¹·g`.
//!
//! A sequence is cut into blocks; block `i` has generating function `gᵢ(z)`
//! and block `i` may be followed by block `j` with weight `w_ij ∈ {0, 1, w, u}`.
//! With `M = I − diag(g)·W`, the sum over all block paths is `1 + e·M⁻¹·g`.
//!
//! The builders below assemble the systems whose solutions are the closed
//! forms in [`crate::pattern`]; solving them here is an independent
//! derivation of those closed forms.

use crate::error::{Error, Result};
use crate::pattern::RunPattern;
use crate::polyalg::{int, Coefficient, Poly, RatFun, Rational, WPoly};

/// Coefficients in `ℚ[w][u]`: a polynomial in `w` whose coefficients are
/// polynomials in `u`.
pub type MarkerCoeff = Poly<Poly<Rational>>;

/// Rational function in `z` with `ℚ[w][u]` coefficients.
pub type MarkerRatFun = RatFun<MarkerCoeff>;

/// Interaction weight between an ordered pair of blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marker {
    /// The pair may not be adjacent.
    Forbidden,
    /// Adjacent with weight 1.
    Free,
    /// Adjacent; marks a pattern occurrence.
    W,
    /// Adjacent; marks the right-end pattern.
    U,
}

impl Marker {
    fn coeff(self) -> MarkerCoeff {
        match self {
            Marker::Forbidden => MarkerCoeff::zero(),
            Marker::Free => MarkerCoeff::one(),
            Marker::W => MarkerCoeff::x(),
            Marker::U => MarkerCoeff::constant(Poly::x()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlockSystem {
    blocks: Vec<RatFun<Rational>>,
    interactions: Vec<Vec<Marker>>,
}

impl BlockSystem {
    pub fn new(blocks: Vec<RatFun<Rational>>, interactions: Vec<Vec<Marker>>) -> Result<Self> {
        let r = blocks.len();
        if r == 0 {
            return Err(Error::Transfer("a block system needs at least one block".into()));
        }
        if interactions.len() != r || interactions.iter().any(|row| row.len() != r) {
            return Err(Error::Transfer(format!("interaction matrix must be {r}x{r}")));
        }
        if (0..r).any(|i| interactions[i][i] != Marker::Forbidden) {
            return Err(Error::Transfer("a block cannot follow itself".into()));
        }
        Ok(BlockSystem { blocks, interactions })
    }

    pub fn blocks(&self) -> &[RatFun<Rational>] {
        &self.blocks
    }

    pub fn interactions(&self) -> &[Vec<Marker>] {
        &self.interactions
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn gf(&self) -> Result<MarkerRatFun> {
        system_gf(self)
    }
}

fn lift_poly(p: &Poly<Rational>) -> Poly<MarkerCoeff> {
    p.map_coeffs(|c| MarkerCoeff::constant(Poly::constant(c.clone())))
}

/// Solves the system exactly.
///
/// Row `i` of `M` is scaled by the denominator `bᵢ` of `gᵢ = aᵢ/bᵢ`, giving a
/// polynomial matrix `M'` with `e·M⁻¹·g = e·M'⁻¹·a`. That quantity equals
/// `−det B / det M'` for the bordered matrix `B = [[M', a], [e, 0]]`, and
/// both determinants are computed fraction-free.
pub fn system_gf(sys: &BlockSystem) -> Result<MarkerRatFun> {
    let r = sys.len();
    let nums: Vec<Poly<MarkerCoeff>> = sys.blocks.iter().map(|g| lift_poly(g.num())).collect();
    let dens: Vec<Poly<MarkerCoeff>> = sys.blocks.iter().map(|g| lift_poly(g.den())).collect();

    let scaled: Vec<Vec<Poly<MarkerCoeff>>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        return dens[i].clone();
                    }
                    let m = sys.interactions[i][j].coeff();
                    if m.is_zero() {
                        Poly::zero()
                    } else {
                        -&nums[i].scale_by(&m)
                    }
                })
                .collect()
        })
        .collect();

    let det_m = bareiss_det(scaled.clone());
    if det_m.is_zero() {
        return Err(Error::SingularSystem);
    }

    let mut bordered = scaled;
    for (row, a) in bordered.iter_mut().zip(&nums) {
        row.push(a.clone());
    }
    let mut last = vec![Poly::<MarkerCoeff>::one(); r];
    last.push(Poly::zero());
    bordered.push(last);
    let det_b = bareiss_det(bordered);

    RatFun::new(&det_m - &det_b, det_m)
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss_det<R: Coefficient>(mut a: Vec<Vec<R>>) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].times(&a[k][k]).minus(&a[i][k].times(&a[k][j]));
                a[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = R::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.negate()
    } else {
        d
    }
}

fn is_u_free(c: &MarkerCoeff) -> bool {
    c.coeffs().iter().all(|inner| inner.is_constant())
}

/// Coefficient of `u^k` of a system solution whose denominator is free of `u`.
pub fn u_coefficient(f: &MarkerRatFun, k: usize) -> Result<RatFun<WPoly>> {
    if !f.den().coeffs().iter().all(is_u_free) {
        return Err(Error::Transfer("denominator depends on u".into()));
    }
    let pick = |c: &MarkerCoeff| c.map_coeffs(|inner| inner.coeff(k));
    let drop_u = |c: &MarkerCoeff| c.map_coeffs(|inner| inner.coeff(0));
    RatFun::new(f.num().map_coeffs(pick), f.den().map_coeffs(drop_u))
}

/// Substitutes `u = value`.
pub fn at_u(f: &MarkerRatFun, value: &Rational) -> Result<RatFun<WPoly>> {
    f.map_coeffs(|c| c.map_coeffs(|inner| inner.eval(value)))
}

/// Embeds a `ℚ[w]` rational function into `ℚ[w][u]`.
pub fn lift_w(f: &RatFun<WPoly>) -> MarkerRatFun {
    f.map_coeffs(|c| c.map_coeffs(|r| Poly::constant(r.clone()))).expect("embedding preserves a nonzero denominator")
}

fn wpoly_to_rational(f: &RatFun<WPoly>) -> Result<RatFun<Rational>> {
    if f.num().coeffs().iter().chain(f.den().coeffs()).any(|c| !c.is_constant()) {
        return Err(Error::Transfer("expected a function free of w".into()));
    }
    f.map_coeffs(|c| c.coeff(0))
}

fn symbol_blocks(pat: &RunPattern, i: usize) -> Result<[RatFun<Rational>; 3]> {
    let g = pat.block_gfs(i)?;
    Ok([g.short, g.long, g.within])
}

/// Marks every block in `a` and every block in `b` as freely adjacent, both ways.
fn connect(inter: &mut [Vec<Marker>], a: std::ops::Range<usize>, b: std::ops::Range<usize>) {
    for i in a {
        for j in b.clone() {
            inter[i][j] = Marker::Free;
            inter[j][i] = Marker::Free;
        }
    }
}

/// Two-symbol system: short/long/admissible blocks for symbols 1 and 2.
///
/// Blocks of the same symbol never touch; an admissible 1-block followed by
/// an admissible 2-block carries `w`.
pub fn two_symbol_system(pat: &RunPattern) -> Result<BlockSystem> {
    if pat.m() != 2 {
        return Err(Error::Transfer(format!("two-symbol system needs m = 2, got {}", pat.m())));
    }
    let mut blocks = symbol_blocks(pat, 1)?.to_vec();
    blocks.extend(symbol_blocks(pat, 2)?);
    let mut inter = vec![vec![Marker::Forbidden; 6]; 6];
    connect(&mut inter, 0..3, 3..6);
    inter[2][5] = Marker::W;
    BlockSystem::new(blocks, inter)
}

/// Two-symbol system with a terminal copy of the admissible 2-block,
/// reachable only from the admissible 1-block through `u`. The `u`
/// coefficient of its solution is `Y₂`.
pub fn right_end_base_system(pat: &RunPattern) -> Result<BlockSystem> {
    let mut blocks = symbol_blocks(pat, 1)?.to_vec();
    blocks.extend(symbol_blocks(pat, 2)?);
    blocks.push(blocks[5].clone());
    let mut inter = vec![vec![Marker::Forbidden; 7]; 7];
    connect(&mut inter, 0..3, 3..6);
    inter[2][6] = Marker::U;
    BlockSystem::new(blocks, inter)
}

/// Extends `(Y_{k−1}, N_{k−1})` by symbol `k`: blocks
/// `[N, Y, short_k, long_k, admissible_k, end]`, where `end` is a terminal
/// admissible k-block entered only from `Y` through `u`.
pub fn right_end_step_system(
    pat: &RunPattern,
    k: usize,
    y_prev: &RatFun<Rational>,
    n_prev: &RatFun<Rational>,
) -> Result<BlockSystem> {
    let [short, long, within] = symbol_blocks(pat, k)?;
    let blocks = vec![n_prev.clone(), y_prev.clone(), short, long, within.clone(), within];
    let mut inter = vec![vec![Marker::Forbidden; 6]; 6];
    connect(&mut inter, 0..2, 2..5);
    inter[1][5] = Marker::U;
    BlockSystem::new(blocks, inter)
}

/// Final extension by symbol `m`: blocks `[N, Y, short_m, long_m,
/// admissible_m]` with `w` on `Y → admissible_m`.
pub fn extension_system(pat: &RunPattern, y_prev: &RatFun<Rational>, n_prev: &RatFun<Rational>) -> Result<BlockSystem> {
    let [short, long, within] = symbol_blocks(pat, pat.m())?;
    let blocks = vec![n_prev.clone(), y_prev.clone(), short, long, within];
    let mut inter = vec![vec![Marker::Forbidden; 5]; 5];
    connect(&mut inter, 0..2, 2..5);
    inter[1][4] = Marker::W;
    BlockSystem::new(blocks, inter)
}

/// All sequences over symbols with the given weights: one block per symbol
/// holding any nonempty run, distinct symbols freely adjacent.
pub fn free_system(probs: &[Rational]) -> Result<BlockSystem> {
    let blocks = probs
        .iter()
        .map(|p| RatFun::new(Poly::monomial(p.clone(), 1), Poly::one_minus(p.clone())))
        .collect::<Result<Vec<_>>>()?;
    let r = probs.len();
    let inter =
        (0..r).map(|i| (0..r).map(|j| if i == j { Marker::Forbidden } else { Marker::Free }).collect()).collect();
    BlockSystem::new(blocks, inter)
}

/// `(Y_k, N_k)` for `k = 2..=upto`, derived purely by solving block systems.
pub fn right_end_chain(pat: &RunPattern, upto: usize) -> Result<Vec<(RatFun<Rational>, RatFun<Rational>)>> {
    if upto < 2 || upto > pat.m() {
        return Err(Error::SymbolIndex { index: upto, m: pat.m() });
    }
    let mut out = Vec::with_capacity(upto - 1);
    for k in 2..=upto {
        let sys = if k == 2 {
            right_end_base_system(pat)?
        } else {
            let (y, n) = &out[out.len() - 1];
            right_end_step_system(pat, k, y, n)?
        };
        let y = wpoly_to_rational(&u_coefficient(&system_gf(&sys)?, 1)?)?;
        let everything = wpoly_to_rational(&at_u(&system_gf(&free_system(&pat.probs()[..k])?)?, &int(1))?)?;
        let n = &(&everything - &RatFun::one()) - &y;
        out.push((y, n));
    }
    Ok(out)
}

/// `Φ_m(w, z)` assembled from block systems only.
pub fn chained_double_gf(pat: &RunPattern) -> Result<RatFun<WPoly>> {
    let sys = if pat.m() == 2 {
        two_symbol_system(pat)?
    } else {
        let chain = right_end_chain(pat, pat.m() - 1)?;
        let (y, n) = chain.last().expect("chain is nonempty");
        extension_system(pat, y, n)?
    };
    u_coefficient(&system_gf(&sys)?, 0)
}
