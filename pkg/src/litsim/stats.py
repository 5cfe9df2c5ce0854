"""Per-year publication statistics: author-count densities and word counts.

The author-count distribution is summarized as a Gaussian kernel density
estimate (bandwidth 0.3) evaluated on a fixed grid and renormalized so the
trapezoid integral over that grid is exactly 1; the raw estimate leaks a
little mass past the grid edges, and downstream consumers treat the curve
as a probability density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from litsim.ingest import Document, PaperMeta

KDE_BANDWIDTH = 0.3
KDE_GRID_STEP = 0.05
EXTREME_AUTHOR_THRESHOLD = 100

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


@dataclass
class YearlyAuthorStats:
    year: int
    author_counts: list[int]
    median: float
    kde: list[tuple[float, float]]
    extreme_fraction: float

    @property
    def n_papers(self) -> int:
        return len(self.author_counts)


@dataclass
class YearlyWordStats:
    year: int
    median_words: float
    total_words: int


def gaussian_kde(counts: list[int], bandwidth: float = KDE_BANDWIDTH,
                 step: float = KDE_GRID_STEP) -> tuple[np.ndarray, np.ndarray]:
    """Renormalized Gaussian KDE of integer counts on [0, max+1] at `step`.

    Returns (grid, density) with density >= 0 integrating (trapezoid) to 1.
    """
    if not counts:
        raise ValueError("cannot estimate a density from zero counts")
    if bandwidth <= 0 or step <= 0:
        raise ValueError("bandwidth and step must be positive")
    values = np.asarray(counts, dtype=np.float64)
    upper = float(np.max(values)) + 1.0
    n_steps = int(round(upper / step))
    grid = np.linspace(0.0, upper, n_steps + 1)
    # Group repeated counts so the kernel sum is over unique values only.
    centers, weights = np.unique(values, return_counts=True)
    z = (grid[:, None] - centers[None, :]) / bandwidth
    density = (np.exp(-0.5 * z * z) @ weights) / (
        len(counts) * bandwidth * math.sqrt(2.0 * math.pi)
    )
    density /= _trapezoid(density, grid)
    return grid, density


def author_stats(metas: list[PaperMeta], year: int) -> YearlyAuthorStats:
    """Author-count summary for one year's papers.

    Records whose author list was absent in the source metadata carry no
    author count and are left out of the distribution.
    """
    counts = [
        len(m.authors) for m in metas if m.year == year and not m.authors_missing
    ]
    if not counts:
        raise ValueError(f"no papers with author counts in year {year}")
    grid, density = gaussian_kde(counts)
    extreme = sum(1 for c in counts if c > EXTREME_AUTHOR_THRESHOLD)
    return YearlyAuthorStats(
        year=year,
        author_counts=counts,
        median=float(np.median(counts)),
        kde=list(zip(grid.tolist(), density.tolist())),
        extreme_fraction=extreme / len(counts),
    )


def word_stats(docs: list[Document], year: int) -> YearlyWordStats:
    """Median and total raw word count over one year's documents."""
    counts = [d.raw_word_count for d in docs if d.meta.year == year]
    if not counts:
        raise ValueError(f"no documents in year {year}")
    return YearlyWordStats(
        year=year,
        median_words=float(np.median(counts)),
        total_words=int(sum(counts)),
    )


def author_stats_by_year(metas: list[PaperMeta]) -> list[YearlyAuthorStats]:
    """author_stats for every year that has at least one counted paper."""
    years = sorted({m.year for m in metas if not m.authors_missing})
    return [author_stats(metas, y) for y in years]


def word_stats_by_year(docs: list[Document]) -> list[YearlyWordStats]:
    """word_stats for every year present in the corpus, ascending."""
    years = sorted({d.meta.year for d in docs})
    return [word_stats(docs, y) for y in years]
