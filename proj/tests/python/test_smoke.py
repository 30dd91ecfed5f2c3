import math

import pytest

import cctree

SIMPLE_CLASS = """class Box {
    int get(int a) {
        return a;
    }
    void bump(int a) {
        if (a > 0) {
            a = a - 1;
        }
    }
}
"""

PRE_METHOD = """void act(int a) {
    log(a);
}
"""

POST_METHOD = """void act(int a) {
    int b = 2;
    log(a);
}
"""


def test_version_is_a_string():
    assert isinstance(cctree.__version__, str)
    assert cctree.__version__.count(".") == 2


def test_parse_and_methods():
    tree = cctree.parse_source(SIMPLE_CLASS)
    assert tree["kind"] == "class_declaration"
    names = [m["qualified_name"] for m in cctree.methods(SIMPLE_CLASS)]
    assert names == ["Box.get(1)", "Box.bump(1)"]


def test_parse_error_is_raised():
    with pytest.raises(RuntimeError):
        cctree.parse_source("class {")


def test_flatten_and_normalize():
    items = cctree.flatten_method('void f() { log("a b"); }')
    assert items[0] == "method_declaration"
    normalized = cctree.normalize(["string_literal|a b"])
    assert normalized == ["string_literal|a_b"]


def test_change_trees_and_root_paths():
    same = cctree.change_trees(PRE_METHOD, PRE_METHOD)
    assert same["pre"] is None and same["post"] is None
    assert same["pre_nodes"] == 0 and same["post_nodes"] == 0

    diff = cctree.change_trees(PRE_METHOD, POST_METHOD)
    assert diff["pre"] is None
    assert diff["post"]["kind"] == "method_declaration"
    assert 0 < diff["post_nodes"] < len(cctree.flatten_method(POST_METHOD))

    paths = cctree.root_path_values(PRE_METHOD)
    assert len(paths) == len(set(paths))
    assert all(p.startswith("/method_declaration") for p in paths)


def test_metrics_keys_and_values():
    values = cctree.metrics("void f(int a) { if (a > 0) { a = a - 1; } }")
    assert values["NUMPAR"] == 1.0
    assert values["McCC"] == 2.0
    assert values["NOC"] == 1.0
    assert set(values) == {
        "LLOC", "LOC", "McCC", "NL", "NLE", "NOC", "NOI", "NOL", "NOS", "NUMPAR",
    }


def test_demo_worked_example():
    result = cctree.demo()
    assert result["pre_change_tree_empty"] is True
    assert result["post_change_tree_nodes"] == 16
    assert result["post_reduction_percent"] > 40.0


def test_embedding_round_trip(tmp_path):
    corpus = cctree.two_cluster_corpus(seed=5, per_cluster=6, min_len=10, max_len=20)
    model = cctree.train_embedding(corpus, dim=16, epochs=5, infer_epochs=10, seed=2)
    vector = model.infer(corpus[0])
    assert len(vector) == 16 and model.dim == 16
    assert model.infer([]) == [0.0] * 16

    path = tmp_path / "model.cct"
    model.save(str(path))
    loaded = cctree.EmbeddingModel.load(str(path))
    assert loaded.infer(corpus[0]) == vector
    assert loaded.vocab_size == model.vocab_size


def test_represent_and_evaluate():
    records = cctree.planted_dataset(seed=1, count=50)
    assert len(records) == 50
    assert sum(1 for r in records if r["label"]) == 10

    vector = cctree.represent(records[0], "metrics")
    assert len(vector) == 20

    report = cctree.evaluate(records, modes=["metrics"], folds=3, seed=1)
    assert report["baseline"]["f1_percent"] == 20.0
    assert len(report["results"]) == 3
    for cell in report["results"]:
        assert math.isfinite(cell["f1_percent"])
        assert len(cell["folds"]) == 3
