import json

import pytest
from fastapi.testclient import TestClient

from conftest import make_runtime
from draftcanvas.mockllm import mock_complete
from draftcanvas.persistence import EVENTS_FILENAME, EventLog, SnapshotStore
from draftcanvas.runtime import Runtime
from draftcanvas.server import create_app


@pytest.fixture
def client(tmp_path):
    store = SnapshotStore(tmp_path)
    runtime = Runtime(
        store.load(),
        lambda b: mock_complete(b, 7),
        snapshots=store,
        events=EventLog(tmp_path / EVENTS_FILENAME),
        session_id="test-session",
    )
    app = create_app(runtime)
    with TestClient(app) as test_client:
        yield test_client


def sse_events(response_text):
    events = []
    for block in response_text.split("\n\n"):
        block = block.strip()
        if block.startswith("data: "):
            events.append(json.loads(block[len("data: "):]))
    return events


def first_canvas_id(client):
    return client.get("/canvases").json()["canvases"][0]["id"]


def run_generate(client, canvas_id, prompt):
    with client.stream(
        "POST", f"/canvases/{canvas_id}/generate", json={"prompt": prompt}
    ) as response:
        assert response.status_code == 200
        body = "".join(response.iter_text())
    return sse_events(body)


class TestCanvasEndpoints:
    def test_create_list_copy_delete(self, client):
        created = client.post("/canvases", json={"name": "Second"}).json()
        assert created["name"] == "Second"
        listing = client.get("/canvases").json()
        assert len(listing["canvases"]) == 2
        assert listing["activeCanvasId"] == created["id"]

        copied = client.post(f"/canvases/{created['id']}/copy")
        assert copied.status_code == 201
        assert copied.json()["name"] == "Second (copy)"

        deleted = client.delete(f"/canvases/{created['id']}")
        assert deleted.status_code == 200
        remaining = [c["id"] for c in client.get("/canvases").json()["canvases"]]
        assert created["id"] not in remaining

    def test_unknown_canvas_404(self, client):
        response = client.post("/canvases/missing/copy")
        assert response.status_code == 404
        assert response.json()["error"] == "UnknownCanvas"


class TestWidgetEndpoints:
    def test_widget_lifecycle(self, client):
        canvas_id = first_canvas_id(client)
        widget = client.post(
            f"/canvases/{canvas_id}/widgets", json={"x": 700, "y": 50}
        ).json()
        assert widget["title"] == "Untitled"
        assert widget["placement"]["x"] == 700

        patched = client.patch(
            f"/widgets/{widget['id']}",
            json={"title": "Protagonist's Name", "value": "Sierra Brook"},
        ).json()
        assert patched["title"] == "Protagonist's Name"

        saved = client.post(f"/widgets/{widget['id']}/values/save").json()
        assert saved["savedValues"] == ["Sierra Brook"]

        assert client.delete(f"/widgets/{widget['id']}").status_code == 200
        assert client.patch(
            f"/widgets/{widget['id']}", json={"value": "x"}
        ).status_code == 404

    def test_suggest_and_activate(self, client):
        canvas_id = first_canvas_id(client)
        widgets = client.post(f"/canvases/{canvas_id}/widgets/suggest").json()["widgets"]
        assert len(widgets) == 4
        assert all(w["isNew"] for w in widgets)
        target = widgets[0]
        active = client.patch(
            f"/widgets/{target['id']}",
            json={"placement": "canvas", "x": 100, "y": 50},
        ).json()
        assert active["placement"] is not None
        assert active["isNew"] is False

    def test_themed_endpoint(self, client):
        canvas_id = first_canvas_id(client)
        response = client.post(
            f"/canvases/{canvas_id}/widgets/themed",
            json={"theme": "Create widgets related to the character"},
        )
        titles = [w["title"] for w in response.json()["widgets"]]
        assert len(titles) == 3
        assert client.post(
            f"/canvases/{canvas_id}/widgets/themed", json={"theme": ""}
        ).status_code == 400

    def test_value_suggestions_endpoint(self, client):
        canvas_id = first_canvas_id(client)
        widgets = client.post(f"/canvases/{canvas_id}/widgets/suggest").json()["widgets"]
        target = next(w for w in widgets if w["title"] == "Setting Description")
        before = target["suggestedValues"]
        updated = client.post(f"/widgets/{target['id']}/values/suggest").json()
        assert len(updated["suggestedValues"]) == len(before) + 2


class TestStreamingEndpoints:
    PROMPT = "Write a short story about survival in the wilderness"

    def test_generate_stream_shape(self, client):
        canvas_id = first_canvas_id(client)
        events = run_generate(client, canvas_id, self.PROMPT)
        chunks = [e["chunk"] for e in events if "chunk" in e]
        done = events[-1]
        assert done["done"] is True
        assert "".join(chunks) == done["finalText"]
        assert all(e["jobId"] == done["jobId"] for e in events)

        document = client.get("/canvases").json()["canvases"][0]["document"]
        assert document["text"] == done["finalText"]
        assert document["wordCount"] == len(done["finalText"].split())

    def test_empty_prompt_400(self, client):
        canvas_id = first_canvas_id(client)
        response = client.post(f"/canvases/{canvas_id}/generate", json={"prompt": ""})
        assert response.status_code == 400
        assert response.json()["error"] == "EmptyPrompt"

    def test_rephrase_stream(self, client):
        canvas_id = first_canvas_id(client)
        run_generate(client, canvas_id, self.PROMPT)
        widgets = client.post(f"/canvases/{canvas_id}/widgets/suggest").json()["widgets"]
        client.patch(
            f"/widgets/{widgets[0]['id']}",
            json={"placement": "canvas", "x": 0, "y": 0},
        )
        with client.stream("POST", f"/canvases/{canvas_id}/rephrase") as response:
            assert response.status_code == 200
            events = sse_events("".join(response.iter_text()))
        assert events[-1]["done"] is True
        constrained_value = widgets[0]["value"]
        assert constrained_value in events[-1]["finalText"]

    def test_rephrase_without_constraints_400(self, client):
        canvas_id = first_canvas_id(client)
        run_generate(client, canvas_id, self.PROMPT)
        response = client.post(f"/canvases/{canvas_id}/rephrase")
        assert response.status_code == 400
        assert response.json()["error"] == "NoActiveConstraints"

    def test_cancel_unknown_job_404(self, client):
        assert client.post("/jobs/missing/cancel").status_code == 404


class TestHistoryEndpoints:
    def test_history_and_revert(self, client):
        canvas_id = first_canvas_id(client)
        first = run_generate(client, canvas_id, "First story")[-1]["finalText"]
        run_generate(client, canvas_id, "Second story")
        history = client.get(f"/canvases/{canvas_id}/history").json()["history"]
        assert [e["cause"] for e in history] == ["Generation", "Generation"]

        reverted = client.post(
            f"/canvases/{canvas_id}/history/{history[0]['id']}/revert"
        ).json()
        assert reverted["text"] == first
        assert len(reverted["history"]) == 3
        assert reverted["history"][-1]["cause"] == "Revert"

    def test_document_put_records_user_edit(self, client):
        canvas_id = first_canvas_id(client)
        document = client.put(
            f"/canvases/{canvas_id}/document", json={"text": "typed by hand"}
        ).json()
        assert document["text"] == "typed by hand"
        assert document["history"][-1]["cause"] == "UserEdit"
        assert document["wordCount"] == 3


class TestEventsEndpoint:
    def test_jsonl_export_with_since(self, client):
        canvas_id = first_canvas_id(client)
        run_generate(client, canvas_id, "First story")
        lines = client.get("/events").text.strip().splitlines()
        records = [json.loads(line) for line in lines]
        assert any(r["kind"] == "PromptSubmitted" for r in records)
        assert all(r["session"] == "test-session" for r in records)

        cutoff = records[-1]["ts"]
        assert client.get(f"/events?since={cutoff}").text.strip() == ""


class TestChatEndpoints:
    def send(self, client, chat_id, content):
        with client.stream(
            "POST", f"/chats/{chat_id}/messages", json={"content": content}
        ) as response:
            assert response.status_code == 200
            return sse_events("".join(response.iter_text()))

    def test_chat_round_trip(self, client):
        chat = client.post("/chats").json()
        events = self.send(client, chat["id"], "hello")
        assert events[-1]["done"] is True
        stored = client.get(f"/chats/{chat['id']}").json()
        assert [m["role"] for m in stored["messages"]] == ["user", "assistant"]
        assert stored["messages"][1]["content"] == events[-1]["finalText"]

    def test_edit_resets_transcript(self, client):
        chat = client.post("/chats").json()
        for i in range(3):
            self.send(client, chat["id"], f"message {i}")
        events = self.send_edit(client, chat["id"], 2, "edited")
        assert events[-1]["done"] is True
        stored = client.get(f"/chats/{chat['id']}").json()
        assert len(stored["messages"]) == 4
        assert stored["messages"][2]["content"] == "edited"

    def send_edit(self, client, chat_id, index, content):
        with client.stream(
            "POST",
            f"/chats/{chat_id}/messages/{index}/edit",
            json={"content": content},
        ) as response:
            assert response.status_code == 200
            return sse_events("".join(response.iter_text()))

    def test_edit_assistant_message_400(self, client):
        chat = client.post("/chats").json()
        self.send(client, chat["id"], "hi")
        response = client.post(
            f"/chats/{chat['id']}/messages/1/edit", json={"content": "x"}
        )
        assert response.status_code == 400
        assert response.json()["error"] == "NotAUserMessage"

    def test_duplicate_and_delete(self, client):
        chat = client.post("/chats").json()
        self.send(client, chat["id"], "hi")
        copy = client.post(f"/chats/{chat['id']}/duplicate").json()
        assert copy["title"].endswith(" (copy)")
        assert len(copy["messages"]) == 2
        client.delete(f"/chats/{chat['id']}")
        ids = [c["id"] for c in client.get("/chats").json()["chats"]]
        assert chat["id"] not in ids and copy["id"] in ids


class TestPersistenceThroughApi:
    def test_state_survives_restart(self, tmp_path):
        store = SnapshotStore(tmp_path)
        runtime = Runtime(
            store.load(),
            lambda b: mock_complete(b, 7),
            snapshots=store,
            events=EventLog(tmp_path / EVENTS_FILENAME),
        )
        with TestClient(create_app(runtime)) as client:
            canvas_id = first_canvas_id(client)
            final = run_generate(client, canvas_id, "A story")[-1]["finalText"]

        runtime2 = Runtime(store.load(), lambda b: mock_complete(b, 7))
        with TestClient(create_app(runtime2)) as client2:
            canvases = client2.get("/canvases").json()["canvases"]
            assert canvases[0]["document"]["text"] == final
