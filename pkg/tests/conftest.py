from __future__ import annotations

import pytest

from draftcanvas.chat import ChatService
from draftcanvas.mockllm import mock_complete
from draftcanvas.persistence import fresh_state
from draftcanvas.runtime import Runtime
from draftcanvas.service import CanvasService


def make_runtime(seed: int = 7, **kwargs) -> Runtime:
    return Runtime(fresh_state(), lambda b: mock_complete(b, seed), **kwargs)


@pytest.fixture
def runtime() -> Runtime:
    return make_runtime()


@pytest.fixture
def service(runtime) -> CanvasService:
    return CanvasService(runtime)


@pytest.fixture
def chat_service(runtime) -> ChatService:
    return ChatService(runtime)
