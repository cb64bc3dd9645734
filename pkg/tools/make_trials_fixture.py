"""Build the bundled 60-trial demo log (src/captchalab/data/trials60.jsonl).

One machine and one human answer per trial, with submissions crafted so
each answer scores the listed rate. The aggregate report over this log is
fixed: machine 89.58% / 65.00%, human 83.75% / 53.33%.

    python3 tools/make_trials_fixture.py
"""

from __future__ import annotations

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from captchalab.captcha import CaptchaSpec  # noqa: E402
from captchalab.harness import TrialStore, score_answer  # noqa: E402

# (truth, machine rate, human rate) for the 60 recorded rounds.
ROUNDS = [
    ("CYMW", 4, 4), ("CYMW", 4, 4), ("NCDN", 4, 4), ("NCDN", 4, 4),
    ("MHEM", 4, 4), ("YKTZ", 4, 3), ("YKTZ", 4, 4), ("PRYV", 4, 4),
    ("AMTW", 4, 3), ("DBIK", 3, 4), ("ANXW", 4, 4), ("PFOQ", 4, 4),
    ("BQQW", 4, 4), ("PVOM", 4, 4), ("WLPE", 4, 3), ("GWQV", 3, 4),
    ("HZNF", 4, 4), ("AZCT", 4, 4), ("MTFA", 4, 4), ("STLQ", 4, 4),
    ("ONOT", 4, 4), ("CIHF", 3, 4), ("LKOG", 4, 4), ("HWRK", 3, 4),
    ("QTVX", 2, 4), ("GPKD", 3, 4), ("IUQH", 4, 3), ("KFVZ", 4, 2),
    ("GFAS", 3, 3), ("VCTD", 3, 3), ("OJOH", 4, 3), ("OBWS", 4, 3),
    ("DZPJ", 3, 2), ("VDPX", 3, 3), ("CRYP", 3, 4), ("CDTR", 3, 2),
    ("WPZQ", 4, 3), ("LOWG", 4, 3), ("ZAPU", 3, 3), ("RRDN", 1, 3),
    ("HLRX", 3, 0), ("PPWL", 4, 1), ("AYSC", 4, 3), ("KXWD", 3, 4),
    ("UHTU", 4, 0), ("PWMD", 4, 4), ("FKZL", 4, 3), ("MZOG", 4, 3),
    ("KYPN", 4, 4), ("VDWX", 3, 4), ("ULHE", 4, 3), ("CSWI", 4, 3),
    ("JFZP", 3, 4), ("JSBC", 4, 3), ("KAAE", 3, 4), ("OFRZ", 4, 3),
    ("GNRP", 2, 3), ("QBKU", 4, 3), ("EYIN", 3, 4), ("KWQX", 4, 4),
]

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "captchalab", "data",
                   "trials60.jsonl")


def corrupt(truth: str, rate: int) -> str:
    """A submission scoring exactly `rate` against truth: trailing positions
    are shifted one letter."""
    chars = list(truth)
    for i in range(rate, len(chars)):
        chars[i] = chr((ord(chars[i]) - 65 + 1) % 26 + 65)
    text = "".join(chars)
    assert score_answer(truth, text) == rate
    return text


def main():
    with open(OUT, "w") as fh:
        for i, (truth, machine_rate, human_rate) in enumerate(ROUNDS, start=1):
            spec = CaptchaSpec(text=truth, seed=i)
            trial_id = f"t{i:05d}"
            ev = {"ev": "trial", "trial_id": trial_id, "created_at": float(i)}
            ev.update(spec.to_json_dict())
            ev["truth"] = truth
            fh.write(json.dumps(ev) + "\n")
            student = f"student-{(i - 1) // 10 + 1}"
            for client, role, rate in (("ocr-1", "machine", machine_rate),
                                       (student, "human", human_rate)):
                fh.write(json.dumps({
                    "ev": "answer", "trial_id": trial_id, "client_id": client,
                    "role": role, "text": corrupt(truth, rate), "rate": rate,
                }) + "\n")

    store = TrialStore(OUT)
    pct = store.aggregate_report().percentages()
    expected = {"machine_char_rate": 89.58, "human_char_rate": 83.75,
                "machine_full_rate": 65.00, "human_full_rate": 53.33}
    assert pct == expected, pct
    print(f"wrote {OUT}: 60 trials, metrics {pct}")


if __name__ == "__main__":
    main()
