"""
Sparse Gaussian linear regression instances.

Samples are divided by sqrt(n) and every design column is normalized to unit
l2-norm; the ground truth is distorted accordingly so that Y = X beta + eps
holds exactly in the normalized coordinates.
"""

import logging
import math
import numpy as np

from src.generation.rng import SeedLike, instance_streams, make_generator
from src.models.data_models import (
    GroundTruth,
    NoiseMode,
    NoiseVector,
    NormalizedDesign,
    RawDesign,
    TrainingSet,
)
from src.models.errors import BadSparsity, DimensionMismatch, ZeroColumn

logger = logging.getLogger(__name__)

ZERO_COLUMN_NORM = 1e-300


def sample_design(n: int, p: int, seed: SeedLike) -> RawDesign:
    """
    Draw an n x p matrix of i.i.d. standard normals.

    The draw is made column by column, so the first p1 columns of a width-p2
    design equal the width-p1 design from the same seed.

    Args:
        n: Sample count
        p: Feature count
        seed: Integer seed or SeedSequence

    Returns:
        RawDesign
    """
    rng = make_generator(seed)
    entries = rng.standard_normal((p, n)).T
    return RawDesign(entries=np.ascontiguousarray(entries))


def normalize(raw: RawDesign) -> NormalizedDesign:
    """
    Divide each column by its l2-norm.

    Raises:
        ZeroColumn: if a column norm is below 1e-300
    """
    norms = np.linalg.norm(raw.entries, axis=0)
    bad = np.flatnonzero(norms < ZERO_COLUMN_NORM)
    if bad.size:
        raise ZeroColumn(int(bad[0]), float(norms[bad[0]]))
    return NormalizedDesign(columns=raw.entries / norms, column_norms=norms)


def make_ground_truth(
    p: int,
    s: int,
    beta_norm: float,
    column_norms: np.ndarray,
    seed: SeedLike,
    *,
    n: int,
) -> GroundTruth:
    """
    Draw an s-sparse regressor with uniformly random direction.

    Args:
        p: Feature count
        s: Sparsity (support is the first s coordinates)
        beta_norm: ||beta_unscaled||_2
        column_norms: Norms of the raw design columns
        seed: Integer seed or SeedSequence
        n: Sample count used for the sqrt(n) scaling

    Returns:
        GroundTruth
    """
    if s < 1 or s > p:
        raise BadSparsity(f"s must lie in [1, {p}], got {s}")
    if not beta_norm > 0:
        raise ValueError(f"beta_norm must be positive, got {beta_norm}")
    if column_norms.shape != (p,):
        raise DimensionMismatch(f"column_norms has shape {column_norms.shape}, expected ({p},)")

    rng = make_generator(seed)
    direction = rng.standard_normal(s)
    while not np.any(direction):
        direction = rng.standard_normal(s)
    beta_unscaled = np.zeros(p)
    beta_unscaled[:s] = beta_norm * direction / np.linalg.norm(direction)

    beta_scaled = beta_unscaled * column_norms / math.sqrt(n)
    return GroundTruth(s=s, beta_unscaled=beta_unscaled, beta_scaled=beta_scaled, beta_norm=beta_norm)


def make_noise(n: int, mode: NoiseMode, level: float, seed: SeedLike) -> NoiseVector:
    """
    Draw the training noise.

    gaussian-sigma: i.i.d. N(0, sigma^2 / n) entries, so E||eps||^2 = sigma^2.
    exact-norm: a Gaussian direction rescaled to ||eps||_2 = level.
    """
    if not level > 0:
        raise ValueError(f"noise level must be positive, got {level}")
    mode = NoiseMode(mode)
    rng = make_generator(seed)
    draw = rng.standard_normal(n)
    if mode is NoiseMode.GAUSSIAN_SIGMA:
        values = draw * (level / math.sqrt(n))
    else:
        values = draw * (level / np.linalg.norm(draw))
    return NoiseVector(values=values, mode=mode, level=float(level))


def assemble_training(
    design: NormalizedDesign, truth: GroundTruth, noise: NoiseVector
) -> TrainingSet:
    """Compute Y = X beta + eps."""
    if truth.beta_scaled.shape != (design.p,):
        raise DimensionMismatch(
            f"beta has {truth.beta_scaled.shape[0]} entries, design has {design.p} columns"
        )
    if noise.values.shape != (design.n,):
        raise DimensionMismatch(
            f"noise has {noise.values.shape[0]} entries, design has {design.n} rows"
        )
    observations = design.columns @ truth.beta_scaled + noise.values
    return TrainingSet(design=design, truth=truth, noise=noise, observations=observations)


def rescale_model(w: np.ndarray, column_norms: np.ndarray, n: int) -> np.ndarray:
    """Map a scaled-coordinate vector back to unscaled coordinates: sqrt(n) w_i / ||H_i||."""
    raise_on_length_mismatch(w, column_norms)
    return math.sqrt(n) * w / column_norms


def generate_training_set(
    n: int,
    p: int,
    s: int,
    beta_norm: float,
    noise_level: float,
    stream: np.random.SeedSequence,
    noise_mode: NoiseMode = NoiseMode.EXACT_NORM,
) -> TrainingSet:
    """
    Full pipeline from one trial stream to a TrainingSet.

    beta_norm = 0 or noise_level = 0 give the null signal / noiseless instance.
    """
    design_seed, truth_seed, noise_seed = instance_streams(stream)
    design = normalize(sample_design(n, p, design_seed))
    if beta_norm > 0:
        truth = make_ground_truth(p, s, beta_norm, design.column_norms, truth_seed, n=n)
    else:
        truth = GroundTruth.zeros(p, s)
    if noise_level > 0:
        noise = make_noise(n, noise_mode, noise_level, noise_seed)
    else:
        noise = NoiseVector.zeros(n)
    logger.debug(f"Generated instance n={n} p={p} s={s} ||eps||={noise.norm:.3e}")
    return assemble_training(design, truth, noise)


def raise_on_length_mismatch(vector: np.ndarray, column_norms: np.ndarray) -> None:
    if vector.shape != column_norms.shape:
        raise DimensionMismatch(
            f"vector has shape {vector.shape}, column_norms has shape {column_norms.shape}"
        )

