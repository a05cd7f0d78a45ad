"""Text completion with on-disk replay.

Fixtures are JSON files named ``<prompt sha256>-<sample index>.json``. The
replay backend only reads them; the http backend writes one for every
completion it receives so the run can be replayed offline later.
"""

import hashlib
import logging
import os
from pathlib import Path

import httpx
from django.conf import settings

from langworld.exceptions import (
    CompletionStatusError,
    CompletionTransportError,
    MissingFixtureError,
)
from langworld.plans.models import CompletionRequest, CompletionResult
from langworld.plans.schemas import FixtureRecordSchema
from langworld.utils import read_json, write_json

logger = logging.getLogger(__name__)


def prompt_hash(prompt):
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


def fixture_key(prompt, sample_index):
    return "%s-%d" % (prompt_hash(prompt), sample_index)


class FixtureStore:
    def __init__(self, directory=None):
        if directory is None:
            directory = settings.LANGWORLD["COMPLETION"]["FIXTURE_DIR"]
        self.directory = Path(directory)

    def path(self, key):
        return self.directory / ("%s.json" % key)

    def load(self, request):
        key = fixture_key(request.prompt, request.sample_index)
        path = self.path(key)
        if not path.exists():
            raise MissingFixtureError(
                "no fixture for prompt %s sample %d in %s"
                % (prompt_hash(request.prompt)[:12], request.sample_index, self.directory)
            )
        record = FixtureRecordSchema().load(read_json(path))
        return CompletionResult(text=record["completion"], backend="replay", key=key)

    def save(self, request, text, backend):
        key = fixture_key(request.prompt, request.sample_index)
        record = FixtureRecordSchema().dump({
            "prompt_hash": prompt_hash(request.prompt),
            "sample_index": request.sample_index,
            "prompt": request.prompt,
            "completion": text,
            "backend": backend,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        })
        path = write_json(self.path(key), record)
        logger.info("wrote fixture %s", path.name)
        return path


class ReplayBackend:
    name = "replay"

    def __init__(self, store=None):
        self.store = store or FixtureStore()

    def complete(self, request):
        return self.store.load(request)


class HttpBackend:
    """POSTs ``{prompt, temperature, max_tokens}`` and reads one text field back."""

    name = "http"

    def __init__(self, config, store=None, transport=None):
        self.config = config
        self.store = store
        self.transport = transport

    def _headers(self):
        headers = {"Content-Type": "application/json"}
        credential = os.environ.get(self.config.credential_env)
        if credential:
            headers["Authorization"] = "Bearer %s" % credential
        return headers

    def complete(self, request):
        if not self.config.endpoint:
            raise CompletionTransportError("no http completion endpoint configured")
        body = {
            "prompt": request.prompt,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        logger.info(
            "requesting completion for prompt %s sample %d",
            prompt_hash(request.prompt)[:12], request.sample_index,
        )
        try:
            with httpx.Client(timeout=self.config.timeout, transport=self.transport) as client:
                response = client.post(self.config.endpoint, json=body, headers=self._headers())
        except httpx.HTTPError as error:
            raise CompletionTransportError(
                "%s %s: %s" % (type(error).__name__, self.config.endpoint, error)
            ) from error
        if not response.is_success:
            raise CompletionStatusError(response.status_code, response.text)
        try:
            text = response.json()[self.config.response_field]
        except (ValueError, KeyError, TypeError) as error:
            raise CompletionTransportError(
                "response from %s has no %r text field" % (self.config.endpoint, self.config.response_field)
            ) from error
        if not isinstance(text, str):
            raise CompletionTransportError("completion field is not text")
        key = fixture_key(request.prompt, request.sample_index)
        if self.store is not None:
            self.store.save(request, text, self.name)
        return CompletionResult(text=text, backend=self.name, key=key)


def complete(request, backend):
    result = backend.complete(request)
    logger.debug("%s completion %s: %d chars", result.backend, result.key, len(result.text))
    return result


def make_request(prompt, sample_index=0, temperature=None, max_tokens=None):
    defaults = settings.LANGWORLD["COMPLETION"]
    return CompletionRequest(
        prompt=prompt,
        temperature=defaults["TEMPERATURE"] if temperature is None else temperature,
        max_tokens=defaults["MAX_TOKENS"] if max_tokens is None else max_tokens,
        sample_index=sample_index,
    )
