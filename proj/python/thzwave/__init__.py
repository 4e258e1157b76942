# SPDX-License-Identifier: Apache-2.0
"""Scalar-diffraction toolkit for terahertz wavefront engineering."""

from thzwave._core import *  # noqa: F401,F403
from thzwave._core import __version__  # noqa: F401
