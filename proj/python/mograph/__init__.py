"""Motion-graph gesture synthesis: python surface over the C++ core."""

from ._mograph import (  # type: ignore[import-not-found]
    MographError,
    articulation_correction,
    channel_names,
    generate_fixture,
    lip_loss,
    onset_envelope,
    rhythm_cost,
    run_pipeline,
    ssim_loss,
)

__all__ = [
    "MographError",
    "articulation_correction",
    "channel_names",
    "generate_fixture",
    "lip_loss",
    "onset_envelope",
    "rhythm_cost",
    "run_pipeline",
    "ssim_loss",
]
