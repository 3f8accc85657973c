#!/usr/bin/env python3
# Copyright (C) 2026 The gclab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes g1_fixture.log and g1_golden.txt.

Golden values are computed from the generated records with Decimal
arithmetic; the log text is never parsed here. Re-running with the same
seed reproduces both files byte for byte.
"""

import random
from decimal import Decimal, ROUND_HALF_EVEN
from pathlib import Path

SEED = 20261014
OUT = Path(__file__).resolve().parent

# Canonical phase -> spellings used in the log (aliases on purpose).
PHASES = {
    "Object Copy": ["Object Copy"],
    "Ext Root Scanning": ["Ext Root Scanning", "Ext Root Scan"],
    "Update/Scan RS": ["Update RS", "Scan RS", "Update/Scan RS"],
    "Ref Proc": ["Ref Proc", "Reference Processing"],
    "Code Root Scanning": ["Code Root Scanning"],
    "Termination": ["Termination"],
    "Choose CSet": ["Choose CSet", "Choose Collection Set"],
    "Clear CT": ["Clear CT"],
}
NOISE = [
    "[0.004s][info][gc] Using G1",
    "[0.005s][info][gc,init] Version: 17.0.8+7 (release)",
    "[0.005s][info][gc,init] Heap Region Size: 1M",
    "random text",
    "",
    "   ",
    "[garbage][info][gc] GC(1) Pause Young 1.0ms",
    "[1.0s][info][gc] GC(x) Pause Young (Normal) 1.0ms",
    "[1.0s][info][gc] GC(3) Pause Sideways (Normal) 1.0ms",
    "[1.0s][info][gc] GC(3) Pause Young (Normal) (G1 Evacuation Pause) 4M->2M(8M)",
]


def ms(rng, lo, hi):
    # Three decimals, as the JVM prints them.
    return Decimal(rng.randint(int(lo * 1000), int(hi * 1000))) / 1000


def size(mb):
    if mb % 1024 == 0:
        return f"{mb // 1024}G"
    return f"{mb}M"


def main():
    rng = random.Random(SEED)
    lines = []
    skipped = 0
    for n in NOISE[:3]:
        lines.append(n)
        skipped += 1

    pauses = []          # (gc_id, duration)
    phase_sum = {k: Decimal(0) for k in PHASES}
    concurrent = Decimal(0)
    last_ts = Decimal(0)
    ts = Decimal("0.250")
    gc_id = 0
    capacity = 1024

    def emit_phases(pause_ms):
        nonlocal skipped
        # Named phases take 60..90% of the pause; Other sits on a debug line.
        budget = pause_ms * Decimal(rng.randint(60, 90)) / 100
        weights = [rng.randint(1, 10) for _ in PHASES]
        weights[0] *= 6  # object copy dominates
        total_w = sum(weights)
        for (name, spellings), w in zip(PHASES.items(), weights):
            d = (budget * w / total_w).quantize(Decimal("0.001"),
                                                rounding=ROUND_HALF_EVEN)
            if d == 0:
                continue
            phase_sum[name] += d
            level = "debug" if name in ("Clear CT", "Choose CSet") else "info"
            indent = "    " if level == "debug" else "  "
            lines.append(f"[{ts}s][{level}][gc,phases] GC({gc_id}) "
                         f"{indent}{rng.choice(spellings)}: {d}ms")
        other = (pause_ms - budget).quantize(Decimal("0.001"))
        lines.append(f"[{ts}s][info][gc,phases] GC({gc_id})   Other: {other}ms")
        lines.append(f"[{ts}s][info][gc,phases] GC({gc_id})   "
                     f"Evacuate Collection Set: {budget.quantize(Decimal('0.001'))}ms")
        skipped += 1  # unknown phase name

    while len(lines) < 420:
        ts += ms(rng, 0.2, 1.5)
        roll = rng.random()
        before = rng.randint(300, 900)
        after = rng.randint(50, before)
        if roll < 0.70:
            d = ms(rng, 2, 45)
            lines.append(f"[{ts}s][info][gc,start] GC({gc_id}) Pause Young (Normal) "
                         "(G1 Evacuation Pause)")
            skipped += 1
            emit_phases(d)
            lines.append(f"[{ts}s][info][gc] GC({gc_id}) Pause Young (Normal) "
                         f"(G1 Evacuation Pause) {before}M->{after}M({size(capacity)}) {d}ms")
            pauses.append((gc_id, d))
            last_ts = ts
        elif roll < 0.82:
            d = ms(rng, 5, 60)
            emit_phases(d)
            lines.append(f"[{ts}s][info][gc] GC({gc_id}) Pause Young (Mixed) "
                         f"(G1 Evacuation Pause) {before}M->{after}M({size(capacity)}) {d}ms")
            pauses.append((gc_id, d))
            last_ts = ts
        elif roll < 0.97:
            # Concurrent cycle: start, marking, remark, cleanup, end.
            lines.append(f"[{ts}s][info][gc] GC({gc_id}) Concurrent Mark Cycle")
            last_ts = ts
            ts += ms(rng, 0.05, 0.3)
            d = ms(rng, 1, 10)
            lines.append(f"[{ts}s][info][gc] GC({gc_id}) Pause Remark "
                         f"{before}M->{after}M({size(capacity)}) {d}ms")
            pauses.append((gc_id, d))
            ts += ms(rng, 0.01, 0.05)
            d = ms(rng, 0.1, 2)
            lines.append(f"[{ts}s][info][gc] GC({gc_id}) Pause Cleanup "
                         f"{after}M->{after}M({size(capacity)}) {d}ms")
            pauses.append((gc_id, d))
            ts += ms(rng, 0.01, 0.05)
            c = ms(rng, 50, 400)
            lines.append(f"[{ts}s][info][gc] GC({gc_id}) Concurrent Mark Cycle {c}ms")
            concurrent += c
            last_ts = ts
        else:
            d = ms(rng, 80, 300)
            lines.append(f"[{ts}s][info][gc] GC({gc_id}) Pause Full (System.gc()) "
                         f"{before}M->{after}M({size(capacity)}) {d}ms")
            pauses.append((gc_id, d))
            last_ts = ts
        if rng.random() < 0.08:
            lines.append(rng.choice(NOISE[3:]))
            skipped += 1
        gc_id += 1

    lines.append(f"[{ts + Decimal('0.5')}s][info][safepoint] Safepoint \"Cleanup\"")
    skipped += 1

    gc_ms = sum(d for _, d in pauses)
    count = len(pauses)
    named = {k: v / gc_ms * 100 for k, v in phase_sum.items()}
    named["Other"] = 100 - sum(named.values())
    q6 = Decimal("0.000001")
    golden = [
        ("lines", len(lines)),
        ("skipped_lines", skipped),
        ("pause_count", count),
        ("total_runtime_s", last_ts),
        ("gc_time_ms", gc_ms),
        ("max_pause_ms", max(d for _, d in pauses)),
        ("avg_pause_ms", (gc_ms / count).quantize(q6)),
        ("gc_fraction_pct", (gc_ms / 1000 / last_ts * 100).quantize(q6)),
        ("concurrent_time_ms", concurrent),
    ]
    for k, v in named.items():
        golden.append(("phase_pct " + k, v.quantize(q6)))

    (OUT / "g1_fixture.log").write_text("\n".join(lines) + "\n")
    with open(OUT / "g1_golden.txt", "w") as f:
        f.write("# key value; generated by gen_g1_fixture.py\n")
        for k, v in golden:
            f.write(f"{k}\t{v}\n")


if __name__ == "__main__":
    main()
