#!/usr/bin/env python3
# Copyright 2026 The absagen Authors.
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

"""Writes the regime-comparison fixture: three disjoint sample sets drawn from
one template distribution (original, generated, test)."""

import json
import random
import sys
from pathlib import Path

ASPECTS = ["battery", "screen", "keyboard", "trackpad", "speakers", "fan",
           "charger", "hinge", "webcam", "processor", "display", "price",
           "warranty", "design", "ports", "memory"]
OPINIONS = {
    0: ["is excellent", "works great", "is a joy", "impressed me", "is superb",
        "is really good", "exceeded expectations", "is fantastic"],
    1: ["is standard", "is average", "is what you expect", "came as described",
        "is ordinary", "is typical", "is there", "is the usual kind"],
    2: ["is terrible", "broke quickly", "is awful", "disappointed me",
        "is really bad", "is a letdown", "failed twice", "is useless"],
}
OPENERS = ["", "honestly", "after a month", "for work", "overall", "to be fair",
           "at home", "on trips"]
TAILS = ["", "for the money", "so far", "in my experience", "these days",
         "on this model", "compared to my old one", "most of the time"]
# Label noise: a share of samples carries an opinion from another class.
NOISE = 0.15


def sample(rng):
    n = 1 if rng.random() < 0.7 else 2
    aspects = rng.sample(ASPECTS, n)
    parts, anns = [], []
    for a in aspects:
        label = rng.choice([0, 0, 1, 2, 2])
        said = label if rng.random() > NOISE else rng.choice([0, 1, 2])
        parts.append(f"the {a} {rng.choice(OPINIONS[said])}")
        anns.append((a, label))
    text = " and ".join(parts)
    opener, tail = rng.choice(OPENERS), rng.choice(TAILS)
    text = (opener + ", " if opener else "") + text + (" " + tail if tail else "")
    text = text[0].upper() + text[1:] + "."
    out = []
    for a, label in anns:
        start = text.lower().index("the " + a) + 4
        out.append({"term": a, "polarity": label, "span": [start, start + len(a)]})
    return text, out


def main(out_dir):
    rng = random.Random(20261016)
    seen = set()
    sizes = {"original": 160, "generated": 160, "test": 200}
    for name, size in sizes.items():
        rows = []
        while len(rows) < size:
            text, anns = sample(rng)
            if text.lower() in seen:
                continue
            seen.add(text.lower())
            rows.append({"id": f"{name[0]}{len(rows) + 1}", "text": text,
                         "domain": "laptop", "annotations": anns,
                         "provenance": "gold"})
        with open(Path(out_dir) / f"{name}.jsonl", "w") as f:
            for r in rows:
                f.write(json.dumps(r, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/fixtures/regime")
