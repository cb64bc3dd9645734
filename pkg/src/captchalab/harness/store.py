"""Trial bookkeeping for the interrogator service.

Every state change is one JSON line appended to the store file (a trial
created, an answer recorded), so reloading a store replays its history
and reproduces the identical report. The store is the single
serialization point: all mutations and reads take its lock.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from pathlib import Path

from ..captcha import CaptchaSpec, random_text
from ..errors import RequestError, StoreError
from ..imgcore import Rng

ROLES = ("human", "machine")


@dataclass
class Trial:
    trial_id: str
    spec: CaptchaSpec
    truth: str
    created_at: float
    status: str = "open"  # open | closed


@dataclass(frozen=True)
class TrialAnswer:
    trial_id: str
    client_id: str
    role: str
    text: str
    rate: int


@dataclass(frozen=True)
class Report:
    """Aggregate metrics over closed trials (rates as fractions in [0, 1])."""

    n_trials: int
    machine_char_rate: float
    human_char_rate: float
    machine_full_rate: float
    human_full_rate: float
    per_trial: tuple[tuple[str, int, int, str], ...]  # id, machine, human, verdict

    def percentages(self) -> dict[str, float]:
        """The four headline metrics as percentages, two decimals, half-up."""
        def pct(x: float) -> float:
            return float(Decimal(x * 100).quantize(Decimal("0.01"),
                                                   rounding=ROUND_HALF_UP))
        return {
            "machine_char_rate": pct(self.machine_char_rate),
            "human_char_rate": pct(self.human_char_rate),
            "machine_full_rate": pct(self.machine_full_rate),
            "human_full_rate": pct(self.human_full_rate),
        }

    def to_json_dict(self) -> dict:
        d = {"n_trials": self.n_trials}
        d.update(self.percentages())
        d["per_trial"] = [
            {"trial_id": tid, "machine_rate": m, "human_rate": h, "verdict": v}
            for tid, m, h, v in self.per_trial
        ]
        return d


def score_answer(truth: str, submitted: str) -> int:
    """Positional case-folded match count; no alignment, no edit distance."""
    t, s = truth.upper(), submitted.upper()
    return sum(1 for a, b in zip(t, s) if a == b)


def _verdict(machine_rate: int, human_rate: int) -> str:
    """Who the interrogator would call human: the more accurate answerer."""
    if human_rate > machine_rate:
        return "human"
    if machine_rate > human_rate:
        return "machine"
    return "indistinguishable"


class TrialStore:
    """In-memory trial state backed by an append-only JSON Lines file."""

    def __init__(self, path: str | Path | None = None, quorum_per_role: int = 1):
        self._lock = threading.Lock()
        self._path = Path(path) if path is not None else None
        self._quorum = quorum_per_role
        self._trials: dict[str, Trial] = {}
        self._order: list[str] = []
        self._answers: dict[str, list[TrialAnswer]] = {}
        if self._path is not None and self._path.exists():
            self._replay(self._path)

    # -- persistence ------------------------------------------------------

    def _replay(self, path: Path):
        with path.open() as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    ev = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise StoreError(f"{path}: line {lineno}: bad JSON ({exc})") from None
                try:
                    self._apply(ev)
                except (KeyError, TypeError, ValueError, RequestError) as exc:
                    raise StoreError(f"{path}: line {lineno}: {exc}") from None

    def _apply(self, ev: dict):
        kind = ev.get("ev")
        if kind == "trial":
            spec_fields = {k: v for k, v in ev.items()
                           if k not in ("ev", "trial_id", "truth", "created_at")}
            spec = CaptchaSpec.from_json_dict(spec_fields)
            trial = Trial(trial_id=ev["trial_id"], spec=spec, truth=ev["truth"],
                          created_at=ev["created_at"])
            if trial.trial_id in self._trials:
                raise ValueError(f"duplicate trial id {trial.trial_id}")
            self._trials[trial.trial_id] = trial
            self._order.append(trial.trial_id)
            self._answers[trial.trial_id] = []
        elif kind == "answer":
            answer = TrialAnswer(trial_id=ev["trial_id"], client_id=ev["client_id"],
                                 role=ev["role"], text=ev["text"], rate=int(ev["rate"]))
            self._admit(answer)
        else:
            raise ValueError(f"unknown event kind {kind!r}")

    def _append(self, ev: dict):
        if self._path is None:
            return
        try:
            with self._path.open("a") as fh:
                fh.write(json.dumps(ev) + "\n")
        except OSError as exc:
            raise StoreError(f"cannot append to {self._path}: {exc}") from exc

    # -- mutations --------------------------------------------------------

    def create_trials(self, count: int, base_seed: int,
                      spec_overrides: dict | None = None) -> list[Trial]:
        """Create `count` trials with seeds base_seed, base_seed+1, ...

        Each trial gets fresh random text drawn from its own seed, so the
        same (count, base_seed) always yields the same truths.
        """
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        overrides = dict(spec_overrides or {})
        if "text" in overrides or "seed" in overrides:
            raise ValueError("per-trial text/seed cannot be overridden")
        length = int(overrides.pop("text_length", 4))
        with self._lock:
            created = []
            for i in range(count):
                seed = base_seed + i
                text = random_text(Rng(seed), length)
                spec = CaptchaSpec(text=text, seed=seed, **overrides)
                trial_id = f"t{len(self._order) + 1:05d}"
                trial = Trial(trial_id=trial_id, spec=spec, truth=text,
                              created_at=time.time())
                self._trials[trial_id] = trial
                self._order.append(trial_id)
                self._answers[trial_id] = []
                ev = {"ev": "trial", "trial_id": trial_id,
                      "created_at": trial.created_at}
                ev.update(spec.to_json_dict())
                ev["truth"] = text
                self._append(ev)
                created.append(trial)
            return created

    def _admit(self, answer: TrialAnswer):
        trial = self._trials.get(answer.trial_id)
        if trial is None:
            raise RequestError(f"unknown trial {answer.trial_id}")
        if answer.role not in ROLES:
            raise ValueError(f"unknown role {answer.role!r}")
        answers = self._answers[answer.trial_id]
        if trial.status == "closed":
            raise RequestError(f"trial {answer.trial_id} is closed")
        if any(a.client_id == answer.client_id for a in answers):
            raise RequestError(
                f"client {answer.client_id} already answered {answer.trial_id}")
        if sum(1 for a in answers if a.role == answer.role) >= self._quorum:
            raise RequestError(
                f"trial {answer.trial_id} already has a {answer.role} answer")
        answers.append(answer)
        have = {role: sum(1 for a in answers if a.role == role) for role in ROLES}
        if all(have[role] >= self._quorum for role in ROLES):
            trial.status = "closed"

    def record_answer(self, trial_id: str, client_id: str, role: str,
                      text: str) -> TrialAnswer:
        """Score a submission against the stored truth and persist it."""
        with self._lock:
            trial = self._trials.get(trial_id)
            if trial is None:
                raise RequestError(f"unknown trial {trial_id}")
            answer = TrialAnswer(trial_id=trial_id, client_id=client_id, role=role,
                                 text=text, rate=score_answer(trial.truth, text))
            self._admit(answer)
            self._append({"ev": "answer", "trial_id": trial_id,
                          "client_id": client_id, "role": role, "text": text,
                          "rate": answer.rate})
            return answer

    # -- queries ----------------------------------------------------------

    def get_trial(self, trial_id: str) -> Trial:
        with self._lock:
            trial = self._trials.get(trial_id)
            if trial is None:
                raise RequestError(f"unknown trial {trial_id}")
            return trial

    def trial_ids(self) -> list[str]:
        with self._lock:
            return list(self._order)

    def open_trials(self, role: str) -> list[str]:
        """Open trial ids still lacking an answer for the given role."""
        if role not in ROLES:
            raise ValueError(f"unknown role {role!r}")
        with self._lock:
            return [tid for tid in self._order
                    if self._trials[tid].status == "open"
                    and not any(a.role == role for a in self._answers[tid])]

    def trial_detail(self, trial_id: str) -> dict:
        """Public view of one trial; truth and rates appear only when closed."""
        with self._lock:
            trial = self._trials.get(trial_id)
            if trial is None:
                raise RequestError(f"unknown trial {trial_id}")
            detail = {"trial_id": trial_id, "status": trial.status,
                      "created_at": trial.created_at}
            if trial.status == "closed":
                detail["truth"] = trial.truth
                detail["spec"] = trial.spec.to_json_dict()
                detail["answers"] = [
                    {"client_id": a.client_id, "role": a.role, "text": a.text,
                     "rate": a.rate}
                    for a in self._answers[trial_id]
                ]
                rates = self._first_rates(trial_id)
                detail["verdict"] = _verdict(rates["machine"], rates["human"])
            return detail

    def _first_rates(self, trial_id: str) -> dict[str, int]:
        rates = {}
        for role in ROLES:
            for a in self._answers[trial_id]:
                if a.role == role:
                    rates[role] = a.rate
                    break
        return rates

    def aggregate_report(self) -> Report:
        """The four headline metrics over closed trials.

        Character rates divide summed rates by summed truth lengths; full
        rates count answers matching every position.
        """
        with self._lock:
            closed = [tid for tid in self._order
                      if self._trials[tid].status == "closed"]
            if not closed:
                raise StoreError("no closed trials to report on")
            char_num = {role: 0 for role in ROLES}
            char_den = {role: 0 for role in ROLES}
            full_num = {role: 0 for role in ROLES}
            per_trial = []
            for tid in closed:
                truth_len = len(self._trials[tid].truth)
                rates = self._first_rates(tid)
                for role in ROLES:
                    char_num[role] += rates[role]
                    char_den[role] += truth_len
                    full_num[role] += rates[role] == truth_len
                per_trial.append((tid, rates["machine"], rates["human"],
                                  _verdict(rates["machine"], rates["human"])))
            n = len(closed)
            return Report(
                n_trials=n,
                machine_char_rate=char_num["machine"] / char_den["machine"],
                human_char_rate=char_num["human"] / char_den["human"],
                machine_full_rate=full_num["machine"] / n,
                human_full_rate=full_num["human"] / n,
                per_trial=tuple(per_trial),
            )
