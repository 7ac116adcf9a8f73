//! Splitting a cycle type into blocks that each have a gadget, then folding
//! the block gadgets into one and wrapping it onto `Z_n`.

use super::gadgets::{j123_c3, j123_cycle, j134_c8, j134_c8_triple, j134_cycle};
use super::{Flavor, JGadget, Result, TwoFactorError};
use crate::graphs::{CycleType, VertexGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockRecipe {
    Single,
    /// `C_3 ∪ C_c`.
    C3Pair,
    /// `C_8 ∪ C_c`.
    C8Pair,
    C8Triple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub recipe: BlockRecipe,
    pub lengths: Vec<u32>,
}

impl Block {
    fn new(recipe: BlockRecipe, lengths: Vec<u32>) -> Self {
        Block { recipe, lengths }
    }

    pub fn order(&self) -> u32 {
        self.lengths.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPlan {
    pub flavor: Flavor,
    pub blocks: Vec<Block>,
}

impl BlockPlan {
    fn sorted(flavor: Flavor, mut blocks: Vec<Block>) -> Self {
        blocks.sort_by(|a, b| {
            b.order()
                .cmp(&a.order())
                .then_with(|| a.lengths.cmp(&b.lengths))
        });
        BlockPlan { flavor, blocks }
    }

    /// All cycle lengths covered by the plan, sorted.
    pub fn lengths(&self) -> Vec<u32> {
        let mut all: Vec<u32> = self.blocks.iter().flat_map(|b| b.lengths.clone()).collect();
        all.sort_unstable();
        all
    }

    fn block_gadget(&self, block: &Block) -> Result<JGadget> {
        let m = block.order();
        match (self.flavor, block.recipe) {
            (Flavor::J123, BlockRecipe::Single) => j123_cycle(m),
            (Flavor::J123, BlockRecipe::C3Pair) => j123_c3(m),
            (Flavor::J134, BlockRecipe::Single) => j134_cycle(m),
            (Flavor::J134, BlockRecipe::C8Pair) => j134_c8(m),
            (Flavor::J134, BlockRecipe::C8Triple) => j134_c8_triple(),
            (flavor, recipe) => Err(TwoFactorError::Precondition(format!(
                "block recipe {recipe:?} has no {flavor} gadget"
            ))),
        }
    }

    /// Concatenates the block gadgets in plan order.
    pub fn gadget(&self) -> Result<JGadget> {
        let mut iter = self.blocks.iter();
        let first = iter
            .next()
            .ok_or_else(|| TwoFactorError::Precondition("empty plan".into()))?;
        let mut acc = self.block_gadget(first)?;
        for block in iter {
            acc = acc.concat(&self.block_gadget(block)?)?;
        }
        Ok(acc)
    }
}

fn eligible_c3_partner(len: u32) -> bool {
    len == 5 || len >= 7
}

/// Blocks for `±{1,2,3}`: each triangle is paired with the largest remaining
/// cycle of length 5 or at least 7, everything else stands alone.
pub fn plan_123(f: &CycleType) -> Result<BlockPlan> {
    if f.order() < 7 {
        return Err(TwoFactorError::OrderTooSmall {
            order: f.order(),
            min: 7,
        });
    }
    let triangles = f.nu(3);
    let mut partners: Vec<u32> = f
        .lengths()
        .iter()
        .copied()
        .filter(|&l| eligible_c3_partner(l))
        .collect();
    if triangles > partners.len() {
        return Err(TwoFactorError::ConditionViolated {
            triangles,
            partners: partners.len(),
        });
    }
    partners.sort_unstable_by(|a, b| b.cmp(a));
    let mut blocks = Vec::new();
    let mut rest: Vec<u32> = f.lengths().iter().copied().filter(|&l| l != 3).collect();
    for &partner in partners.iter().take(triangles) {
        let pos = rest
            .iter()
            .position(|&l| l == partner)
            .expect("partner present");
        rest.remove(pos);
        blocks.push(Block::new(BlockRecipe::C3Pair, vec![3, partner]));
    }
    blocks.extend(
        rest.into_iter()
            .map(|l| Block::new(BlockRecipe::Single, vec![l])),
    );
    Ok(BlockPlan::sorted(Flavor::J123, blocks))
}

/// Blocks for `±{1,3,4}`: octagons are paired off, an odd one out joins the
/// largest other cycle or, failing that, two more octagons.
pub fn plan_134(f: &CycleType) -> Result<BlockPlan> {
    if f.order() < 9 {
        return Err(TwoFactorError::OrderTooSmall {
            order: f.order(),
            min: 9,
        });
    }
    if f.girth() < 6 {
        return Err(TwoFactorError::GirthViolation { girth: f.girth() });
    }
    let octagons = f.nu(8);
    let mut others: Vec<u32> = f.lengths().iter().copied().filter(|&l| l != 8).collect();
    others.sort_unstable_by(|a, b| b.cmp(a));
    let mut blocks = Vec::new();
    let mut pairs = octagons / 2;
    if octagons % 2 == 1 {
        if let Some(&largest) = others.first() {
            others.remove(0);
            blocks.push(Block::new(BlockRecipe::C8Pair, vec![8, largest]));
        } else {
            pairs -= 1;
            blocks.push(Block::new(BlockRecipe::C8Triple, vec![8, 8, 8]));
        }
    }
    blocks.extend((0..pairs).map(|_| Block::new(BlockRecipe::C8Pair, vec![8, 8])));
    blocks.extend(
        others
            .into_iter()
            .map(|l| Block::new(BlockRecipe::Single, vec![l])),
    );
    Ok(BlockPlan::sorted(Flavor::J134, blocks))
}

fn factorise_with(n: u32, f: &CycleType, plan: BlockPlan) -> Result<[VertexGraph; 3]> {
    if f.order() != n {
        return Err(TwoFactorError::OrderMismatch {
            expected: n,
            found: f.order(),
        });
    }
    plan.gadget()?.wrap()
}

/// Three 2-factors of type `F` decomposing `Cay(Z_n; ±{1,2,3})`.
pub fn factorise_123(n: u32, f: &CycleType) -> Result<[VertexGraph; 3]> {
    factorise_with(n, f, plan_123(f)?)
}

/// Three 2-factors of type `F` decomposing `Cay(Z_n; ±{1,3,4})`.
pub fn factorise_134(n: u32, f: &CycleType) -> Result<[VertexGraph; 3]> {
    factorise_with(n, f, plan_134(f)?)
}
