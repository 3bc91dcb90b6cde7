"""Chat-completion backends and the transcript log.

``Client.complete`` is the one entry point: it dispatches to the HTTP
adapter, a replay file, or one of the offline simulators.
"""

from __future__ import annotations

import json
import logging
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Sequence

import httpx

from .corpus import Document
from .errors import (
    BackendError,
    BackendUnavailable,
    ConfigError,
    MissingCredentials,
    ParseError,
    ReplayMiss,
    RequestRejected,
)
from .protocol import REGIMES, Conversation, PromptRegime, build_conversation
from .simulators import SIMULATORS

log = logging.getLogger(__name__)

BACKENDS = ("http", "echo_leaker", "redactor", "partial_masker", "replay")
DEFAULT_KEY_ENV = "LEAKAUDIT_API_KEY"


@dataclass(frozen=True)
class ClientConfig:
    backend: str
    endpoint_url: str = ""
    model_id: str = ""
    api_key_env_name: str = DEFAULT_KEY_ENV
    max_retries: int = 3
    base_backoff: float = 1.0
    max_parallel: int = 4
    timeout: float = 60.0
    temperature: float | None = None
    seed: int = 0
    replay_path: str | None = None

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")
        if self.max_parallel < 1:
            raise ConfigError("max_parallel must be >= 1")
        if self.base_backoff < 0 or self.timeout <= 0:
            raise ConfigError("base_backoff must be >= 0 and timeout > 0")
        if self.backend == "http" and not self.endpoint_url:
            raise ConfigError("http backend needs endpoint_url")
        if self.backend == "replay" and not self.replay_path:
            raise ConfigError("replay backend needs replay_path")

    @property
    def simulated(self) -> bool:
        return self.backend in SIMULATORS


@dataclass
class Transcript:
    transcript_id: str
    record_ids: list[str]
    regime: str
    regulation: str
    request_messages: list[dict]
    response_text: str | None
    status: str  # ok | error
    backend: str
    model_id: str
    seed: int
    conversation_hash: str
    dataset_fingerprint: str = ""
    error: str | None = None
    started_at: str | None = None
    latency: float = 0.0

    def __post_init__(self):
        if self.status not in ("ok", "error"):
            raise ValueError(f"bad status {self.status!r}")
        if (self.response_text is not None) != (self.status == "ok"):
            raise ValueError("response_text must be present iff status is ok")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, ensure_ascii=False)


def read_transcripts(path) -> list[Transcript]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(Transcript(**json.loads(line)))
            except (ValueError, TypeError) as exc:
                raise ParseError(f"malformed transcript: {exc}", no) from exc
    return out


class TranscriptWriter:
    """Append-only JSONL log; appends from several threads are serialized."""

    def __init__(self, path, append: bool = False):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._fh = open(self.path, "a" if append else "w", encoding="utf-8")

    def write(self, transcript: Transcript) -> None:
        with self._lock:
            self._fh.write(transcript.to_json() + "\n")
            self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def load_replay(path) -> dict[str, str]:
    """conversation hash -> response text, from a transcript file."""
    return {t.conversation_hash: t.response_text for t in read_transcripts(path) if t.status == "ok"}


_RETRYABLE = {429, 500, 502, 503, 504}


class Client:
    """Thread-safe completion client; at most ``max_parallel`` calls run at once."""

    def __init__(self, config: ClientConfig, *, transport: httpx.BaseTransport | None = None,
                 sleep: Callable[[float], None] = time.sleep, behavior_table=None,
                 environ=None):
        self.config = config
        self._sleep = sleep
        self._slots = threading.BoundedSemaphore(config.max_parallel)
        self._jitter = random.Random(config.seed)
        self._jitter_lock = threading.Lock()
        self._behavior = behavior_table
        self._http = None
        self._replay = None
        if config.backend == "http":
            env = os.environ if environ is None else environ
            key = env.get(config.api_key_env_name)
            if not key:
                raise MissingCredentials(f"environment variable {config.api_key_env_name} is not set")
            self._http = httpx.Client(
                transport=transport,
                timeout=config.timeout,
                headers={"Authorization": f"Bearer {key}"},
            )
        elif config.backend == "replay":
            self._replay = load_replay(config.replay_path)

    def close(self) -> None:
        if self._http is not None:
            self._http.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def backoff_delay(self, attempt: int) -> float:
        with self._jitter_lock:
            jitter = self._jitter.uniform(-0.2, 0.2)
        return self.config.base_backoff * (2 ** attempt) * (1 + jitter)

    def complete(self, conversation: Conversation) -> str:
        with self._slots:
            return self._dispatch(conversation)

    def _dispatch(self, conversation: Conversation) -> str:
        backend = self.config.backend
        if backend == "http":
            return self._complete_http(conversation)
        if backend == "replay":
            key = conversation.fingerprint()
            if key not in self._replay:
                raise ReplayMiss(f"no recorded response for conversation {key[:12]}")
            return self._replay[key]
        if backend == "partial_masker":
            return SIMULATORS[backend](conversation, self.config.seed, self._behavior)
        return SIMULATORS[backend](conversation, self.config.seed)

    def _complete_http(self, conversation: Conversation) -> str:
        body = {"model": self.config.model_id, "messages": conversation.wire_messages()}
        if self.config.temperature is not None:
            body["temperature"] = self.config.temperature
        last = "no attempt made"
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                self._sleep(self.backoff_delay(attempt - 1))
            try:
                resp = self._http.post(self.config.endpoint_url, json=body)
            except httpx.TimeoutException as exc:
                last = f"timeout: {exc}"
                continue
            except httpx.TransportError as exc:
                last = f"transport error: {exc}"
                continue
            if resp.status_code in _RETRYABLE:
                last = f"HTTP {resp.status_code}"
                continue
            if resp.status_code >= 400:
                raise RequestRejected(f"HTTP {resp.status_code}: {resp.text[:200]}", resp.status_code)
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise RequestRejected(f"unexpected response body: {exc}", resp.status_code) from exc
        raise BackendUnavailable(f"gave up after {self.config.max_retries + 1} attempts ({last})")


def complete(conversation: Conversation, config: ClientConfig, **kwargs) -> str:
    """One-shot convenience wrapper around ``Client``."""
    with Client(config, **kwargs) as client:
        return client.complete(conversation)


# -- running an audit -------------------------------------------------------

@dataclass
class RunPlan:
    regimes: Sequence[str] = REGIMES
    batch_size: int = 10
    two_turn: bool = False
    dataset_fingerprint: str = ""

    def __post_init__(self):
        bad = [r for r in self.regimes if r not in REGIMES]
        if bad:
            raise ConfigError(f"unknown regime(s): {', '.join(bad)}")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if self.two_turn and "baseline" not in self.regimes:
            raise ConfigError("two-turn runs need the baseline regime")


def _batches(documents: Sequence[Document], size: int) -> list[Sequence[Document]]:
    return [documents[i:i + size] for i in range(0, len(documents), size)]


def _call(client: Client, tid: str, conversation: Conversation, fingerprint: str) -> Transcript:
    cfg = client.config
    started = None if cfg.simulated else datetime.now(timezone.utc).isoformat()
    t0 = time.perf_counter()
    text, status, error = None, "ok", None
    try:
        text = client.complete(conversation)
    except BackendError as exc:
        status, error = "error", f"{type(exc).__name__}: {exc}"
        log.warning("%s failed: %s", tid, error)
    latency = 0.0 if cfg.simulated else round(time.perf_counter() - t0, 6)
    return Transcript(
        transcript_id=tid,
        record_ids=list(conversation.record_ids),
        regime=conversation.regime.regime,
        regulation=conversation.regime.regulation,
        request_messages=conversation.wire_messages(),
        response_text=text,
        status=status,
        backend=cfg.backend,
        model_id=cfg.model_id,
        seed=cfg.seed,
        conversation_hash=conversation.fingerprint(),
        dataset_fingerprint=fingerprint,
        error=error,
        started_at=started,
        latency=latency,
    )


def run_audit(client: Client, documents: Sequence[Document], plan: RunPlan,
              sink: Callable[[Transcript], None] | None = None) -> list[Transcript]:
    """Send every batch under every regime; transcripts come back in submission order."""
    if not documents:
        raise ConfigError("no documents to audit")
    domain = documents[0].domain
    batches = _batches(documents, plan.batch_size)
    jobs = [(b, regime) for regime in plan.regimes for b in range(len(batches))]
    results: list[Transcript] = []

    with ThreadPoolExecutor(max_workers=client.config.max_parallel) as pool:
        def submit(items, priors=None):
            futures = []
            for b, regime in items:
                prior = priors.get(b) if priors else None
                conv = build_conversation(batches[b], PromptRegime.for_domain(domain, regime), prior)
                tid = f"t{b + 1:05d}-{regime}"
                futures.append(pool.submit(_call, client, tid, conv, plan.dataset_fingerprint))
            done = [f.result() for f in futures]
            for t in done:
                if sink is not None:
                    sink(t)
            results.extend(done)
            return done

        if plan.two_turn:
            base = submit([j for j in jobs if j[1] == "baseline"])
            priors = {int(t.transcript_id[1:6]) - 1: t.response_text for t in base if t.status == "ok"}
            submit([j for j in jobs if j[1] != "baseline"], priors)
        else:
            submit(jobs)
    return results


def write_transcripts(transcripts: Iterable[Transcript], path, append: bool = False) -> None:
    with TranscriptWriter(path, append) as w:
        for t in transcripts:
            w.write(t)
