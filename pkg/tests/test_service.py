"""HTTP API tests: fixture runs, on-demand explanations, the inline
upload path, and staged error reporting."""

import pytest
from fastapi.testclient import TestClient

from provexplain.service import create_app

INLINE_BODY = {
    "inline": {
        "schema_text": (
            "org(oid:number, oname:string:affiliation:"
            '"organization|organizations")\n'
            'author(aid:number, aname:string:person:"author|authors", '
            "oid:number)\n"
        ),
        "tables": {
            "org": "oid,oname\n1,TAU\n2,UPENN\n",
            "author": "aid,aname,oid\n1,Tova M.,1\n2,Susan D.,2\n",
        },
        "tree": (
            "1 Return VB 0 root\n"
            "2 the DT 3 det\n"
            "3 organization NN 1 dobj\n"
            "4 of IN 3 prep\n"
            "5 authors NNS 4 pobj\n"
        ),
        "query": "q(oname) :- org(oid, oname), author(aid, aname, oid)",
        "question": "Return the organization of authors",
    }
}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def q7_run(client):
    response = client.post(
        "/queries", json={"fixture": "mini_mas", "query": "q7"}
    )
    assert response.status_code == 200
    return response.json()


class TestFixturesEndpoint:
    def test_catalog(self, client):
        data = client.get("/fixtures").json()
        names = [entry["name"] for entry in data]
        assert "mini_mas" in names and "union_small" in names

    def test_catalog_details(self, client):
        data = client.get("/fixtures").json()
        mas = next(entry for entry in data if entry["name"] == "mini_mas")
        q7 = next(q for q in mas["queries"] if q["name"] == "q7")
        assert q7["question"].startswith("Return the organization")
        org = next(rel for rel in mas["relations"] if rel["name"] == "org")
        assert org["rows"] == 2


class TestQueryRuns:
    def test_fixture_run_payload(self, q7_run):
        assert q7_run["run_id"] == "mini_mas.q7"
        assert [a["answer_text"] for a in q7_run["answers"]] == ["TAU", "UPENN"]
        assert q7_run["answers"][0]["id"] == "mini_mas.q7:0"
        assert q7_run["answers"][0]["assignments"] == 5
        assert q7_run["answers"][0]["metrics"]["factorized_length"] == 15
        assert set(q7_run["timings"]) == {
            "evaluate_s",
            "factorize_s",
            "sentences_s",
            "total_s",
        }

    def test_answers_carry_levels(self, q7_run):
        levels = q7_run["answers"][0]["levels"]
        assert levels[0] == {"word_id": 2, "word": "authors"}

    def test_repeat_posts_reuse_the_run(self, client, q7_run):
        again = client.post(
            "/queries", json={"fixture": "mini_mas", "query": "q7"}
        )
        assert again.json() == q7_run


class TestExplanations:
    def test_single(self, client, q7_run):
        got = client.get(
            "/answers/mini_mas.q7:0/explanation", params={"mode": "single"}
        )
        assert got.status_code == 200
        assert got.json()["text"] == q7_run["answers"][0]["single"]

    def test_factorized(self, client, q7_run):
        got = client.get(
            "/answers/mini_mas.q7:0/explanation", params={"mode": "factorized"}
        ).json()
        assert got["text"] == q7_run["answers"][0]["factorized"]["canonical"]
        assert got["pretty"] == q7_run["answers"][0]["factorized"]["pretty"]

    def test_summarized_by_word(self, client):
        got = client.get(
            "/answers/mini_mas.q7:0/explanation",
            params={"mode": "summarized", "level": "authors"},
        ).json()
        assert got["level"] == {"word_id": 2, "word": "authors"}
        assert got["text"].startswith("TAU is the organization of 2 authors")

    def test_summarized_by_word_id(self, client):
        by_id = client.get(
            "/answers/mini_mas.q7:0/explanation",
            params={"mode": "summarized", "level": "2"},
        ).json()
        by_word = client.get(
            "/answers/mini_mas.q7:0/explanation",
            params={"mode": "summarized", "level": "authors"},
        ).json()
        assert by_id["text"] == by_word["text"]

    def test_numeric_question_word_wins_over_id(self, client):
        got = client.get(
            "/answers/mini_mas.q7:0/explanation",
            params={"mode": "summarized", "level": "2005"},
        ).json()
        assert got["level"]["word_id"] == 5

    def test_payload_names_the_answer(self, client):
        got = client.get(
            "/answers/mini_mas.q7:1/explanation", params={"mode": "single"}
        ).json()
        assert got["answer"] == "UPENN"
        assert got["answer_id"] == "mini_mas.q7:1"


class TestInlineRuns:
    def test_explicit_mapping(self, client):
        body = {**INLINE_BODY}
        body["inline"] = dict(INLINE_BODY["inline"], mapping=[{"3": "oname"}])
        response = client.post("/queries", json=body)
        assert response.status_code == 200
        data = response.json()
        assert data["run_id"].startswith("inline-")
        assert [a["answer_text"] for a in data["answers"]] == ["TAU", "UPENN"]

    def test_derived_mapping(self, client):
        response = client.post("/queries", json=INLINE_BODY)
        assert response.status_code == 200
        data = response.json()
        texts = [a["single"] for a in data["answers"]]
        assert "TAU is the organization of Tova M." in texts

    def test_same_body_same_run_id(self, client):
        first = client.post("/queries", json=INLINE_BODY).json()
        second = client.post("/queries", json=INLINE_BODY).json()
        assert first["run_id"] == second["run_id"]

    def test_inline_explanations_work(self, client):
        run = client.post("/queries", json=INLINE_BODY).json()
        answer_id = run["answers"][0]["id"]
        got = client.get(
            f"/answers/{answer_id}/explanation", params={"mode": "single"}
        )
        assert got.status_code == 200
        assert got.json()["text"] == run["answers"][0]["single"]


class TestErrors:
    def test_unknown_fixture(self, client):
        response = client.post(
            "/queries", json={"fixture": "nope", "query": "q1"}
        )
        assert response.status_code == 404
        body = response.json()
        assert body["code"] == "LOOKUP_FAILED"
        assert body["stage"] == "load"

    def test_unknown_query(self, client):
        response = client.post(
            "/queries", json={"fixture": "mini_mas", "query": "q99"}
        )
        assert response.status_code == 404
        assert response.json()["stage"] == "load"

    def test_fixture_without_query(self, client):
        response = client.post("/queries", json={"fixture": "mini_mas"})
        assert response.status_code == 400
        assert response.json()["code"] == "INVALID_PARAMS"

    def test_no_source_at_all(self, client):
        response = client.post("/queries", json={})
        assert response.status_code == 400

    def test_parse_stage_is_reported(self, client):
        body = {"inline": dict(INLINE_BODY["inline"], query="not a query")}
        response = client.post("/queries", json=body)
        assert response.status_code == 422
        assert response.json()["stage"] == "parse"

    def test_mapping_stage_is_reported(self, client):
        body = {
            "inline": dict(
                INLINE_BODY["inline"], mapping=[{"3": "oname", "5": "oname"}]
            )
        }
        response = client.post("/queries", json=body)
        assert response.status_code == 422
        assert response.json()["stage"] == "mapping"

    def test_unknown_answer_id(self, client):
        response = client.get(
            "/answers/mini_mas.q9:0/explanation", params={"mode": "single"}
        )
        assert response.status_code == 404

    def test_malformed_answer_id(self, client):
        response = client.get(
            "/answers/garbage/explanation", params={"mode": "single"}
        )
        assert response.status_code == 404

    def test_unknown_mode(self, client, q7_run):
        response = client.get(
            "/answers/mini_mas.q7:0/explanation", params={"mode": "verbose"}
        )
        assert response.status_code == 400
        assert response.json()["stage"] == "explanation"

    def test_summarized_without_level(self, client, q7_run):
        response = client.get(
            "/answers/mini_mas.q7:0/explanation", params={"mode": "summarized"}
        )
        assert response.status_code == 400

    def test_bad_level(self, client, q7_run):
        response = client.get(
            "/answers/mini_mas.q7:0/explanation",
            params={"mode": "summarized", "level": "editors"},
        )
        assert response.status_code == 400

    def test_answer_index_out_of_range(self, client, q7_run):
        response = client.get(
            "/answers/mini_mas.q7:7/explanation", params={"mode": "single"}
        )
        assert response.status_code == 404
        assert response.json()["stage"] == "explanation"
