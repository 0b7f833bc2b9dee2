import numpy as np
import pytest

import dirform as df


@pytest.fixture(scope="session")
def default_fat():
    """Geometric cell masses 2**(-|k|-2); |G| = 0.75."""
    return df.fat_cantor()


@pytest.fixture(scope="session")
def heavy_fat():
    """Plateau masses used by the packaged finite-measure scenarios."""
    return df.fat_cantor(df.CellMasses(base=0.99, ratio=0.4, plateau=4))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)
