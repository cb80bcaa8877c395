"""Client for an external text-completion HTTP endpoint.

POSTs the de-facto completion JSON shape ({model, prompt, temperature,
top_p, repetition_penalty, max_tokens}) and drives batches with bounded
concurrency, retrying 429s and transport failures with exponential
backoff plus jitter.
"""
from __future__ import annotations

import logging
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import httpx

from .archive import Prompt

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 5
BACKOFF_BASE = 1.0
CREDENTIAL_ENV_VAR = "CORPUSDIFF_API_KEY"


class EndpointError(Exception):
    """Endpoint returned a non-retryable failure."""


@dataclass(frozen=True, slots=True)
class GenerationParams:
    temperature: float = 0.7
    top_p: float = 0.9
    repetition_penalty: float = 1.1
    max_new_tokens: int = 200

    def to_payload(self) -> dict:
        return {
            "temperature": self.temperature,
            "top_p": self.top_p,
            "repetition_penalty": self.repetition_penalty,
            "max_tokens": self.max_new_tokens,
        }


@dataclass(slots=True)
class EndpointConfig:
    base_url: str
    model: str = ""
    credential_env: str = CREDENTIAL_ENV_VAR
    timeout: float = 120.0

    def headers(self) -> dict[str, str]:
        token = os.environ.get(self.credential_env, "")
        if token:
            return {"Authorization": f"Bearer {token}"}
        return {}


@dataclass(slots=True)
class GeneratedDoc:
    doc_id: str
    prompt: str
    completion: str
    model_name: str

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "prompt": self.prompt,
            "completion": self.completion,
            "model_name": self.model_name,
        }


@dataclass(slots=True)
class GenerationOutcome:
    doc_id: str
    doc: GeneratedDoc | None
    error: str | None
    attempts: int


@dataclass(slots=True)
class CompletionClient:
    config: EndpointConfig
    max_attempts: int = MAX_ATTEMPTS
    backoff_base: float = BACKOFF_BASE
    transport: httpx.BaseTransport | None = None  # injectable for tests
    _sleep: object = field(default=time.sleep, repr=False)

    def _client(self) -> httpx.Client:
        return httpx.Client(
            base_url=self.config.base_url,
            headers=self.config.headers(),
            timeout=self.config.timeout,
            transport=self.transport,
        )

    def _extract_text(self, body: dict) -> str:
        if isinstance(body.get("text"), str):
            return body["text"]
        choices = body.get("choices")
        if isinstance(choices, list) and choices \
                and isinstance(choices[0], dict) \
                and isinstance(choices[0].get("text"), str):
            return choices[0]["text"]
        raise EndpointError(f"response missing text field: {body!r}")

    def generate(
        self,
        prompt: Prompt,
        params: GenerationParams = GenerationParams(),
        http: httpx.Client | None = None,
    ) -> tuple[GeneratedDoc, int]:
        """Single completion call; returns (doc, attempts used)."""
        payload = {"model": self.config.model, "prompt": prompt.text}
        payload.update(params.to_payload())
        own_client = http is None
        client = http or self._client()
        try:
            last_error: Exception | None = None
            for attempt in range(1, self.max_attempts + 1):
                try:
                    response = client.post("/v1/completions", json=payload)
                except httpx.TransportError as exc:
                    last_error = exc
                else:
                    if response.status_code == 200:
                        text = self._extract_text(response.json())
                        doc = GeneratedDoc(
                            doc_id=prompt.doc_id,
                            prompt=prompt.text,
                            completion=text,
                            model_name=self.config.model,
                        )
                        return doc, attempt
                    if response.status_code == 429 or response.status_code >= 500:
                        last_error = EndpointError(
                            f"HTTP {response.status_code}: {response.text}"
                        )
                    else:
                        raise EndpointError(
                            f"HTTP {response.status_code}: {response.text}"
                        )
                if attempt < self.max_attempts:
                    delay = self.backoff_base * (2 ** (attempt - 1))
                    delay *= 1.0 + random.random() * 0.25
                    self._sleep(delay)
            raise EndpointError(
                f"giving up after {self.max_attempts} attempts: {last_error}"
            )
        finally:
            if own_client:
                client.close()

    def generate_corpus(
        self,
        prompts: list[Prompt],
        params: GenerationParams = GenerationParams(),
        max_in_flight: int = 4,
    ) -> list[GenerationOutcome]:
        """One outcome per prompt, in input order, with bounded concurrency.

        Per-prompt failures after retry exhaustion are recorded, not
        fatal; EndpointError is raised only when every prompt fails.
        """
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if params.repetition_penalty != 1.0:
            log.warning(
                "repetition_penalty=%s is passed through; endpoints without "
                "support will ignore it", params.repetition_penalty,
            )

        def run_one(prompt: Prompt) -> GenerationOutcome:
            with self._client() as http:
                try:
                    doc, attempts = self.generate(prompt, params, http=http)
                    return GenerationOutcome(
                        doc_id=prompt.doc_id, doc=doc, error=None,
                        attempts=attempts,
                    )
                except EndpointError as exc:
                    return GenerationOutcome(
                        doc_id=prompt.doc_id, doc=None, error=str(exc),
                        attempts=self.max_attempts,
                    )

        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            outcomes = list(pool.map(run_one, prompts))
        if prompts and all(o.doc is None for o in outcomes):
            errors = "; ".join(o.error or "" for o in outcomes[:3])
            raise EndpointError(
                f"all {len(prompts)} prompts failed (first errors: {errors})"
            )
        return outcomes
