"""Chat-completion agent client with content-addressed caching and replay.

Every request is identified by a sha256 digest over its full content
(model id, both prompts, decoding parameters), so a cache or replay fixture
can answer it without any notion of request ordering.  The remote backend is
the only component that touches the network; swapping in a
:class:`ReplayBackend` makes a run fully offline.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Protocol

import requests

logger = logging.getLogger(__name__)

API_KEY_ENV_VAR = "VALOR_API_KEY"
TRANSIENT_STATUS = {429, 500, 502, 503, 504}
MAX_ATTEMPTS = 5


class PayloadError(ValueError):
    """Raw agent text does not contain exactly one recoverable JSON document."""


class ReplayMissError(KeyError):
    """A replay fixture has no entry for the requested digest."""


class AgentTransportError(RuntimeError):
    """The remote endpoint failed after retries, or refused authentication."""


@dataclass(frozen=True)
class DecodingParams:
    temperature: float = 0.0
    max_tokens: int = 1024


@dataclass(frozen=True)
class AgentRequest:
    system_message: str
    user_prompt: str
    decoding: DecodingParams = DecodingParams()
    model_id: str = "gpt-4"

    def __post_init__(self) -> None:
        if not self.system_message or not self.user_prompt:
            raise ValueError("agent prompts must be non-empty")


@dataclass(frozen=True)
class AgentResponse:
    raw_text: str
    parsed_payload: Any = None
    cache_hit: bool = False


def cache_key(request: AgentRequest) -> str:
    """64-hex content digest; any change to the request changes the key."""
    canonical = json.dumps(
        {
            "model_id": request.model_id,
            "system_message": request.system_message,
            "user_prompt": request.user_prompt,
            "temperature": request.decoding.temperature,
            "max_tokens": request.decoding.max_tokens,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# --- payload recovery ---------------------------------------------------------

_FENCE_RE = re.compile(r"```(?:json)?\s*\n(.*?)```", re.DOTALL)
_TRAILING_COMMA_RE = re.compile(r",(\s*[}\]])")


def _try_load(text: str) -> Any | None:
    text = text.strip()
    if not text:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        return json.loads(_TRAILING_COMMA_RE.sub(r"\1", text))
    except json.JSONDecodeError:
        return None


def _balanced_spans(text: str) -> list[str]:
    """Top-level {...} / [...] spans, respecting string literals."""
    spans: list[str] = []
    depth = 0
    start = -1
    in_string = False
    escape = False
    for i, ch in enumerate(text):
        if in_string:
            if escape:
                escape = False
            elif ch == "\\":
                escape = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            if depth > 0:
                in_string = True
            continue
        if ch in "{[":
            if depth == 0:
                start = i
            depth += 1
        elif ch in "}]":
            if depth > 0:
                depth -= 1
                if depth == 0 and start >= 0:
                    spans.append(text[start : i + 1])
                    start = -1
    return spans


def parse_payload(raw_text: str) -> Any:
    """Recover the single JSON document inside possibly chatty agent text.

    Tolerates markdown code fences, prose before or after the document, and
    trailing commas.  Raises :class:`PayloadError` when nothing parses or
    when several distinct documents are present.
    """
    candidates: list[Any] = []
    fenced = _FENCE_RE.findall(raw_text)
    sources = fenced if fenced else _balanced_spans(raw_text)
    for chunk in sources:
        parsed = _try_load(chunk)
        if parsed is not None and isinstance(parsed, (dict, list)):
            candidates.append(parsed)
    if not candidates:
        # A bare document with no prose at all parses directly.
        parsed = _try_load(raw_text)
        if isinstance(parsed, (dict, list)):
            candidates.append(parsed)
    if not candidates:
        raise PayloadError("no structured payload")
    first = candidates[0]
    for other in candidates[1:]:
        if other != first:
            raise PayloadError("multiple conflicting documents")
    return first


# --- backends -----------------------------------------------------------------


class Backend(Protocol):
    def send(self, request: AgentRequest) -> str: ...


class RemoteBackend:
    """POSTs chat-completion requests, retrying transient failures.

    The API key is read from the environment at call time unless passed
    explicitly; authentication failures are terminal, never retried.
    """

    def __init__(
        self,
        endpoint: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        backoff_base: float = 0.5,
        session: requests.Session | None = None,
    ) -> None:
        self.endpoint = endpoint
        self.api_key = api_key
        self.timeout = timeout
        self.backoff_base = backoff_base
        self.session = session or requests.Session()

    def send(self, request: AgentRequest) -> str:
        key = self.api_key or os.environ.get(API_KEY_ENV_VAR)
        if not key:
            raise AgentTransportError(f"no API key: set {API_KEY_ENV_VAR}")
        body = {
            "model": request.model_id,
            "messages": [
                {"role": "system", "content": request.system_message},
                {"role": "user", "content": request.user_prompt},
            ],
            "temperature": request.decoding.temperature,
            "max_tokens": request.decoding.max_tokens,
        }
        headers = {"Authorization": f"Bearer {key}"}
        last_error: Exception | None = None
        for attempt in range(MAX_ATTEMPTS):
            if attempt:
                time.sleep(self.backoff_base * (2 ** (attempt - 1)))
            try:
                resp = self.session.post(
                    self.endpoint, json=body, headers=headers, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_error = exc
                logger.warning("transport error (attempt %d): %s", attempt + 1, exc)
                continue
            if resp.status_code in (401, 403):
                raise AgentTransportError(f"authentication failed ({resp.status_code})")
            if resp.status_code in TRANSIENT_STATUS:
                last_error = AgentTransportError(f"status {resp.status_code}")
                logger.warning("transient status %d (attempt %d)", resp.status_code, attempt + 1)
                continue
            if resp.status_code != 200:
                raise AgentTransportError(f"unexpected status {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise AgentTransportError(f"malformed completion response: {exc}") from exc
        raise AgentTransportError(f"gave up after {MAX_ATTEMPTS} attempts: {last_error}")


class ReplayBackend:
    """Answers requests from a recorded digest -> raw_text fixture.

    Never opens a network connection; a digest absent from the fixture is an
    error rather than a fallthrough to any live backend.
    """

    def __init__(self, fixture_path: str | Path) -> None:
        self.fixture_path = Path(fixture_path)
        self._responses = _read_digest_lines(self.fixture_path, required=True)

    def send(self, request: AgentRequest) -> str:
        digest = cache_key(request)
        if digest not in self._responses:
            raise ReplayMissError(f"replay miss: {digest}")
        return self._responses[digest]


def _read_digest_lines(path: Path, required: bool = False) -> dict[str, str]:
    out: dict[str, str] = {}
    if not path.exists():
        if required:
            raise FileNotFoundError(f"replay fixture not found: {path}")
        return out
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            out[record["digest"]] = record["raw_text"]
        except (json.JSONDecodeError, KeyError, TypeError):
            logger.warning("skipping corrupt record at %s:%d", path, lineno)
    return out


def write_fixture(path: str | Path, responses: dict[str, str]) -> None:
    """Write a digest -> raw_text replay fixture (sorted for stable diffs)."""
    lines = [
        json.dumps({"digest": digest, "raw_text": text}, sort_keys=True)
        for digest, text in sorted(responses.items())
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


# --- cache ----------------------------------------------------------------------


class ResponseCache:
    """Append-only newline-delimited response store keyed by request digest.

    Corrupt lines are skipped with a log line, never fatal.  Writes are
    serialized so concurrent workers cannot interleave records.
    """

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, str] = {}
        if self.path.exists():
            self._entries = _read_digest_lines(self.path)

    def get(self, digest: str) -> str | None:
        return self._entries.get(digest)

    def put(self, digest: str, request: AgentRequest, raw_text: str) -> None:
        record = {
            "digest": digest,
            "request": {
                "model_id": request.model_id,
                "system_message": request.system_message,
                "user_prompt": request.user_prompt,
                "temperature": request.decoding.temperature,
                "max_tokens": request.decoding.max_tokens,
            },
            "raw_text": raw_text,
        }
        with self._lock:
            if digest in self._entries:
                return
            self._entries[digest] = raw_text
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")


# --- rate limiting ---------------------------------------------------------------


class TokenBucket:
    """Classic token bucket; acquire() blocks until a token is available."""

    def __init__(self, rate_per_s: float, capacity: float | None = None) -> None:
        if rate_per_s <= 0:
            raise ValueError("rate must be positive")
        self.rate = rate_per_s
        self.capacity = capacity if capacity is not None else max(1.0, rate_per_s)
        self._tokens = self.capacity
        self._stamp = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                self._tokens = min(self.capacity, self._tokens + (now - self._stamp) * self.rate)
                self._stamp = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            time.sleep(wait)


# --- client ----------------------------------------------------------------------


@dataclass
class Agent:
    """Backend plus cache plus throttling, behind a single complete() call.

    The parallelism semaphore bounds in-flight backend calls regardless of
    how wide the caller fans out; cache hits bypass both limiter and bucket.
    """

    backend: Backend
    cache: ResponseCache | None = None
    parallelism: int = 4
    rate_limit_per_s: float | None = None
    _semaphore: threading.BoundedSemaphore = field(init=False, repr=False)
    _bucket: TokenBucket | None = field(init=False, repr=False, default=None)

    def __post_init__(self) -> None:
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        self._semaphore = threading.BoundedSemaphore(self.parallelism)
        if self.rate_limit_per_s is not None:
            self._bucket = TokenBucket(self.rate_limit_per_s)

    def complete(self, request: AgentRequest) -> AgentResponse:
        digest = cache_key(request)
        if self.cache is not None:
            cached = self.cache.get(digest)
            if cached is not None:
                return AgentResponse(cached, _best_effort_parse(cached), cache_hit=True)
        with self._semaphore:
            if self._bucket is not None:
                self._bucket.acquire()
            raw_text = self.backend.send(request)
        if self.cache is not None:
            self.cache.put(digest, request, raw_text)
        return AgentResponse(raw_text, _best_effort_parse(raw_text), cache_hit=False)


def _best_effort_parse(raw_text: str) -> Any:
    try:
        return parse_payload(raw_text)
    except PayloadError:
        return None
