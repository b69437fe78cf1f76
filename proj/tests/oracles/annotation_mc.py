# Copyright 2026 The deepoint Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Monte-Carlo oracle for the noisy annotation bound.

Input: a dataset directory exported from the acceptance benchmark
(2 rooms x 5 actors, 60 s, 6 cameras, default noise, seed 2026).

For every pointing frame, the cameras whose exported wrist confidence is at
least 0.5 are kept (occlusion and dropout do not depend on pixel noise). The
true wrist is reprojected into those cameras, perturbed with isotropic
N(0, 2 px) noise, and re-triangulated by maximum likelihood. The error is the
angle between wrist->marker directions from the estimated and the true wrist.
The frozen bound is 1.2x the ML mean over several noise draws.

Usage: python3 annotation_mc.py <dataset_dir>
"""
import json
import pathlib
import sys

import numpy as np
from scipy.optimize import least_squares

SIGMA = 2.0
MIN_CONF = 0.5
REPEATS = 20
SEED = 20261016


def load_cameras(room):
    cams = {}
    for c in room["cameras"]:
        R = np.array(c["rotation"], dtype=float).reshape(3, 3)
        t = np.array(c["translation"], dtype=float)
        k = c["intrinsics"]
        K = np.array([[k["fx"], 0, k["cx"]], [0, k["fy"], k["cy"]], [0, 0, 1.0]])
        cams[c["id"]] = K @ np.hstack([R, t[:, None]])
    return cams


def project(P, X):
    h = P @ np.append(X, 1.0)
    return h[:2] / h[2]


def ml_triangulate(Ps, uv, x0):
    def resid(X):
        return np.concatenate([project(P, X) - z for P, z in zip(Ps, uv)])

    return least_squares(resid, x0, xtol=1e-12, ftol=1e-12, gtol=1e-12).x


def angle_deg(a, b):
    return np.degrees(np.arctan2(np.linalg.norm(np.cross(a, b)), a @ b))


def main(root):
    rng = np.random.default_rng(SEED)
    errors = []
    for sdir in sorted(pathlib.Path(root).glob("session_*")):
        room = json.loads((sdir / "room.json").read_text())
        actor = json.loads((sdir / "actor.json").read_text())
        wrist = 9 if actor["dominant_side"] == "left" else 10
        cams = load_cameras(room)
        markers = {m["id"]: np.array(m["position"]) for m in room["markers"]}
        conf = {}
        for cid in cams:
            rows = [json.loads(l) for l in (sdir / "tracks" / f"{cid}.jsonl").open()]
            conf[cid] = [r["keypoints"][wrist][2] for r in rows]
        for line in (sdir / "truth.jsonl").open():
            rec = json.loads(line)
            if not rec["is_pointing"]:
                continue
            f = rec["frame"]
            X = np.array(rec["skeleton"][wrist])
            M = markers[rec["marker_id"]]
            used = [cid for cid in cams if conf[cid][f] >= MIN_CONF]
            if len(used) < 2:
                continue
            Ps = [cams[c] for c in used]
            d_true = (M - X) / np.linalg.norm(M - X)
            for _ in range(REPEATS):
                uv = [project(P, X) + rng.normal(0, SIGMA, 2) for P in Ps]
                Xh = ml_triangulate(Ps, uv, X)
                d = (M - Xh) / np.linalg.norm(M - Xh)
                errors.append(angle_deg(d, d_true))
    errors = np.array(errors)
    mean = errors.mean()
    print(f"samples={errors.size} ml_mean_deg={mean:.6e} "
          f"sem={errors.std() / np.sqrt(errors.size):.2e} bound_deg={1.2 * mean:.6e}")


if __name__ == "__main__":
    main(sys.argv[1])
