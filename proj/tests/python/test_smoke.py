# SPDX-License-Identifier: Apache-2.0
#
# thzwave - scalar-diffraction toolkit for terahertz wavefront engineering
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

import hashlib
import math

import numpy as np
import pytest

import thzwave as tw


def test_grid_at_full_scale():
    g = tw.make_grid(0.25, 1e12)
    assert g.elements_per_side == 1667
    assert g.wavelength == pytest.approx(299792458.0 / 1e12)


def test_bandwidth_table_entry():
    assert tw.required_bandwidth(1e12, 32, 16) == 7.8125e9
    with pytest.raises(ValueError):
        tw.required_bandwidth(1e12, 1, 12)


def test_focused_aperture_has_unit_gain_at_focus():
    g = tw.make_grid(0.02, 1e12)
    f = tw.synthesize(g, tw.WavefrontSpec(tw.WavefrontKind.focusing, focal_length=0.05))
    assert f.weights.shape == (g.elements_per_side, g.elements_per_side)
    assert tw.normalized_gain(f, 0.0, 0.0, 0.05) == pytest.approx(1.0, abs=1e-9)


def test_asm_conserves_power_without_cutoffs():
    g = tw.make_grid(0.02, 1e12)
    f = tw.synthesize(g, tw.WavefrontSpec(tw.WavefrontKind.planar, taper_waist=0.003))
    plan = tw.PropagationPlan(pad_factor=2, evanescent_cutoff=False, band_limit=False)
    s = tw.propagate_asm(f, 0.01, plan)
    assert s.samples.ndim == 2 and s.samples.dtype == np.complex128
    assert s.power() == pytest.approx(f.power() * g.element_pitch**2, rel=1e-9)


def test_obstacle_lowers_power():
    g = tw.make_grid(0.02, 1e12)
    f = tw.synthesize(g, tw.WavefrontSpec(tw.WavefrontKind.planar))
    disc = tw.ObstacleSpec(tw.ObstacleShape.disc, 0.006, plane_z=0.01)
    free = tw.propagate_asm(f, 0.03)
    blocked = tw.propagate_with_obstacles(f, [disc], 0.03)
    assert blocked.power() < free.power()


def test_bad_key_raises_config_error():
    text = "[capacity]\ntarget_rate = 1e12\nmode_count = 4\n"
    with pytest.raises(tw.ConfigError, match="capacity.mode_count"):
        tw.parse_scenario(text)


def test_presets_round_trip():
    for name in tw.preset_names():
        ini = tw.preset(name).to_ini()
        assert tw.parse_scenario(ini).to_ini() == ini


def test_run_fig5_writes_checksummed_artifacts(tmp_path):
    digest, artifacts = tw.run_scenario(tw.preset("fig5"), tmp_path)
    assert len(digest) == 64
    paths = {str(p): sha for p, sha, _ in artifacts}
    table = tmp_path / "bandwidth.csv"
    assert table.exists()
    sha = hashlib.sha256(table.read_bytes()).hexdigest()
    assert sha in paths.values()
    assert "32,16,7.8125e9" in table.read_text()


def test_closed_forms():
    lam = 299792458.0 / 1e12
    assert tw.fraunhofer_distance(0.05, lam) == pytest.approx(2 * 0.05**2 / lam, rel=1e-12)
    assert math.isclose(tw.j0_zero(1), 2.404825557695773, rel_tol=1e-12)
