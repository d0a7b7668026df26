from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class SearchConfig:
    """Caps and seeds shared by every search.

    exhaustive_limit: enumerate all hom-space combinations when p**dim <= this.
    random_trials: fixed-seed random combinations tried otherwise.
    """

    seed: int = 0
    exhaustive_limit: int = 4096
    random_trials: int = 256
    module_dim_cap: int = 3
    algebra_dim_cap: int = 4
    group_order_cap: int = 24
    carrier_cap: int = 6

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def with_(self, **changes) -> SearchConfig:
        return replace(self, **changes)


DEFAULT = SearchConfig()
