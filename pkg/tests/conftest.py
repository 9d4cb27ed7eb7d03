import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from valor.corpus import AnnotatedImage, ImageSource, ObjectInstance

DATA = Path(__file__).parent / "data"


class ScriptedBackend:
    """Backend stub that answers requests in authored order.

    Keeps the requests it saw so tests can assert on rendered prompts.
    """

    def __init__(self, *texts: str) -> None:
        self.texts = list(texts)
        self.requests = []

    def send(self, request) -> str:
        self.requests.append(request)
        if not self.texts:
            raise AssertionError("scripted backend exhausted")
        return self.texts.pop(0)


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def surf_images() -> list[AnnotatedImage]:
    def img(image_id: str, *names: str) -> AnnotatedImage:
        return AnnotatedImage(
            image_id,
            tuple(ObjectInstance(n) for n in names),
            ImageSource.SCENE_GRAPH_DATASET,
        )

    return [
        img("img1", "surfboard", "wave"),
        img("img2", "surfboard", "wave"),
        img("img3", "surfboard", "sand"),
    ]
