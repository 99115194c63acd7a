# Copyright 2026 The ConDec Toolkit Authors. All Rights Reserved.
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

"""Independent oracles for values frozen into the C++ tests.

Pure-python re-derivations from first principles (no shared code with the
C++ implementation). Run: python3 tests/oracles/oracles.py
"""
import math
import re
from collections import Counter


def tokens(s):
    return [t for t in re.split(r"[^a-z0-9]+", s.lower()) if t]


def bm25(query, docs, k1=1.2, b=0.75):
    toks = {k: tokens(v) for k, v in docs.items()}
    n = len(docs)
    avg = sum(len(t) for t in toks.values()) / n
    out = {}
    for k, t in toks.items():
        tf = Counter(t)
        s = 0.0
        for q in tokens(query):
            if tf[q] == 0:
                continue
            df = sum(1 for u in toks.values() if q in u)
            idf = math.log((n - df + 0.5) / (df + 0.5) + 1)
            s += idf * tf[q] * (k1 + 1) / (tf[q] + k1 * (1 - b + b * len(t) / avg))
        out[k] = s
    return out


def token_f1(a, b):
    ca, cb = Counter(tokens(a)), Counter(tokens(b))
    common = sum((ca & cb).values())
    if common == 0:
        return 0.0
    p, r = common / sum(ca.values()), common / sum(cb.values())
    return 2 * p * r / (p + r)


def info_nce(zx, zs, tau, zbar=None):
    total = 0.0
    for i, x in enumerate(zx):
        logits = [sum(a * b for a, b in zip(x, s)) / tau for s in zs]
        if zbar and zbar[i] is not None:
            logits.append(sum(a * b for a, b in zip(x, zbar[i])) / tau)
        total += -math.log(math.exp(logits[i]) / sum(math.exp(l) for l in logits))
    return total


def prf(correct, npred, ngold):
    p, r = correct / npred, correct / ngold
    return 2 * p * r / (p + r)


if __name__ == "__main__":
    s = bm25("star light", {"sent1": "a star produces light", "sent2": "the sun is a star"})
    print("bm25 star light:", repr(s["sent1"]), repr(s["sent2"]))
    print("contrastive n=2 tau=1:", repr(info_nce([(1, 0), (0, 1)], [(1, 0), (0, 1)], 1.0)))
    print("contrastive n=2 tau=0.05:", repr(info_nce([(1, 0), (0, 1)], [(1, 0), (0, 1)], 0.05)))
    print("hard n=1:", repr(info_nce([(1, 0)], [(1, 0)], 1.0, [(1, 0)])), repr(math.log(2)))
    print("total:", repr(1.75 + 0.1 * math.log(2)))
    print("cosine((1,1),(1,0)):", repr(1 / math.sqrt(2)))
    relu = [[max(v, 0) for v in row] for row in [[1, -1], [3, 1]]]
    print("project mean:", [sum(c) / 2 for c in zip(*relu)])
    a = "new york state is located in the northern hemisphere"
    print("token f1 one word changed:", repr(token_f1(a, a.replace("located", "situated"))))
    print("gpt4 int2 vs gold int2:", repr(token_f1(
        "December is during the winter in New York state",
        "december is during the winter for new york state")))
    print("gpt35 int1 vs gold int2:", repr(token_f1(
        "December is during the winter in the northern hemisphere",
        "december is during the winter for new york state")))
    pred = {"sent23", "sent22", "sent9", "sent15", "sent14"}
    gold = {"sent14", "sent5", "sent23", "sent15"}
    print("gpt35 leaves f1:", repr(prf(len(pred & gold), len(pred), len(gold))))
