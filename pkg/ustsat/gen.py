"""
Seeded random skewed k-SAT

Each clause draws k distinct variables uniformly from 1..n and makes every
literal unnegated with probability p. Duplicate clauses are allowed.

The stream is numpy's PCG64 bit generator seeded with the 64-bit instance
seed. Pinned check: Generator(PCG64(0)).random(4) returns
0.6369616873214543, 0.2697867137638703, 0.04097352393619469,
0.016527635528529094. Draw order per formula: the (m, k) variable matrix,
redraws of rows holding a repeated variable, then the (m, k) polarity
uniforms.
"""
import logging
from pathlib import Path
from typing import List, Union

import numpy as np

from .cnf import Formula, save_formula
from .schemas import GenParams, MAX_SEED

log = logging.getLogger(__name__)

PRNG_TEST_VECTOR = (0.6369616873214543, 0.2697867137638703, 0.04097352393619469, 0.016527635528529094)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def derive_instance_seed(master_seed: int, p_index: int, r_index: int, instance_index: int) -> int:
    """Independent 64-bit seed per grid cell and instance"""
    sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=(p_index, r_index, instance_index))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _draw_variables(rng: np.random.Generator, n: int, m: int, k: int) -> np.ndarray:
    if 2 * k > n:
        # dense clauses: rejection would stall, take permutation prefixes
        return np.array([rng.permutation(n)[:k] + 1 for _ in range(m)], dtype=np.int64).reshape(m, k)

    variables = rng.integers(1, n + 1, size=(m, k))
    while True:
        ordered = np.sort(variables, axis=1)
        repeated = np.flatnonzero((ordered[:, 1:] == ordered[:, :-1]).any(axis=1))
        if repeated.size == 0:
            return variables
        variables[repeated] = rng.integers(1, n + 1, size=(repeated.size, k))


def generate(params: GenParams) -> Formula:
    n, k, p = params.n, params.k, params.p
    m = params.num_clauses
    if p > 0.5:
        log.warning("p=%g exceeds 0.5; by convention p is the rarer polarity", p)
    if m == 0:
        log.warning("generating an empty formula (m=0)")

    rng = make_rng(params.seed)
    variables = _draw_variables(rng, n, m, k)
    unnegated = rng.random((m, k)) < p
    literals = np.where(unnegated, variables, -variables)
    return Formula.from_clauses(n, literals.tolist(), comments=[params.describe()])


def instance_filename(params: GenParams) -> str:
    return f"k{params.k}_n{params.n}_m{params.num_clauses}_p{params.p:g}_s{params.seed}.cnf"


def write_instances(params: GenParams, count: int, out_dir: Union[str, Path]) -> List[Path]:
    """Write count instances seeded seed, seed+1, ...; each file name records its seed"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for offset in range(count):
        instance = params.model_copy(update={"seed": (params.seed + offset) % (MAX_SEED + 1)})
        formula = generate(instance)
        paths.append(save_formula(formula, out_dir / instance_filename(instance), formula.comments))
        log.info("wrote %s (%d clauses)", paths[-1], formula.num_clauses)
    return paths
