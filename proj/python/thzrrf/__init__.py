# SPDX-License-Identifier: Apache-2.0
"""THz radio radiance fields of 3D Gaussians."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
