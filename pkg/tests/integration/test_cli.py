"""Integration tests for the pamr command line."""
import io
import json
from unittest.mock import patch

import pytest

from pamr.main import main

FA1_RECORD = """# ::id fa1
# ::snt doxtar mixâhad be tehrân beravad.
(x / xastan
   :ARG0 (x2 / doxtar)
   :ARG1 (x3 / raftan
      :ARG0 x2
      :ARG4 (t / city
         :wiki "tehrân"
         :name (n / name
            :op1 "tehrân"))))
"""

SHAYAD_AS_ARG = """# ::id bad1
# ::snt shâyad bârân bebârad.
(x / bâridan
   :ARG0 (x2 / bârân)
   :manner (x3 / shâyad))
"""

VARIANT_LV = """# ::id warn1
(x / âb_shodan
   :ARG1 (x2 / yax))
"""


def _write(temp_dir, name, text):
    path = temp_dir / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _chain_corpus(record_id, concepts):
    """One record whose graph is a :ARG0 chain over ``concepts``."""
    body = ""
    for i, concept in enumerate(concepts):
        body += f"{'' if i == 0 else ' :ARG0 '}(v{i} / {concept}"
    return f"# ::id {record_id}\n{body}{')' * len(concepts)}\n"


@pytest.mark.integration
def test_parse_json_lists_triples(temp_dir, capsys):
    """Test that --format json lists the 13 triples of the running example."""
    # Arrange
    path = _write(temp_dir, "fa1.amr", FA1_RECORD)

    # Act
    code = main(["parse", path, "--format", "json"])

    # Assert
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["records"][0]["id"] == "fa1"
    assert len(data["records"][0]["triples"]) == 13
    assert data["records"][0]["triples"][0] == {
        "kind": "top", "source": "x", "role": "TOP", "target": "xastan"}


@pytest.mark.integration
def test_parse_text_round_trips(temp_dir, capsys):
    """Test that text output reproduces the record."""
    # Arrange
    path = _write(temp_dir, "fa1.amr", FA1_RECORD)

    # Act
    code = main(["parse", path])

    # Assert
    assert code == 0
    assert capsys.readouterr().out == FA1_RECORD


@pytest.mark.integration
def test_parse_canonical(temp_dir, capsys):
    """Test canonical variable names on output."""
    # Arrange
    path = _write(temp_dir, "fa1.amr", FA1_RECORD)

    # Act
    main(["parse", path, "--canonical"])

    # Assert
    out = capsys.readouterr().out
    assert "(x / xastan" in out
    assert ":ARG0 (d / doxtar)" in out
    assert ":ARG0 d" in out


@pytest.mark.integration
def test_parse_reads_stdin(capsys):
    """Test that '-' reads the corpus from standard input."""
    # Act
    with patch("sys.stdin", io.StringIO("(a / b)\n")):
        code = main(["parse", "-"])

    # Assert
    assert code == 0
    assert "(a / b)" in capsys.readouterr().out


@pytest.mark.integration
def test_parse_empty_file_is_usage_error(temp_dir, caplog):
    """Test that an empty file exits 2 with a message."""
    # Arrange
    path = _write(temp_dir, "empty.amr", "")

    # Act
    code = main(["parse", path])

    # Assert
    assert code == 2
    assert "no records found" in caplog.text


@pytest.mark.integration
def test_parse_malformed_paren_reports_line(temp_dir, caplog):
    """Test that an unbalanced graph exits 2 naming the line."""
    # Arrange
    path = _write(temp_dir, "bad.amr", "# ::id s1\n# ::snt x\n(a / b\n   :ARG0 (c / d)\n")

    # Act
    code = main(["parse", path])

    # Assert
    err = caplog.text
    assert code == 2
    assert "line 3" in err
    assert "UnbalancedParen" in err


@pytest.mark.integration
@pytest.mark.parametrize("command", ["parse", "check", "stats"])
def test_invalid_utf8_is_a_format_error(temp_dir, caplog, command):
    """Test that bytes that are not UTF-8 exit 2 naming the file and offset."""
    # Arrange
    path = temp_dir / "latin.amr"
    path.write_bytes(b'(a / b :op1 "\xff\xfe")\n')

    # Act
    code = main([command, str(path)])

    # Assert
    assert code == 2
    assert f"{path}: not valid UTF-8 at byte 13" in caplog.text


@pytest.mark.integration
def test_invalid_utf8_on_stdin(caplog):
    """Test that undecodable standard input is reported like a file."""
    # Arrange
    stdin = io.TextIOWrapper(io.BytesIO(b"(a / \xffb)"), encoding="utf-8")

    # Act
    with patch("sys.stdin", stdin):
        code = main(["parse", "-"])

    # Assert
    assert code == 2
    assert "<stdin>: not valid UTF-8 at byte 5" in caplog.text


@pytest.mark.integration
def test_invalid_utf8_lexicon(temp_dir, caplog):
    """Test that an undecodable lexicon file exits 2 instead of crashing."""
    # Arrange
    corpus = _write(temp_dir, "ok.amr", FA1_RECORD)
    lexicon = temp_dir / "bad.lex"
    lexicon.write_bytes(b"FRAME\tpokhtan\tARG0=\xe9\n")

    # Act
    code = main(["check", corpus, "--lexicon", str(lexicon)])

    # Assert
    assert code == 2
    assert "not valid UTF-8 at byte 19" in caplog.text


@pytest.mark.integration
def test_missing_file_is_io_error(temp_dir, caplog):
    """Test that an unreadable file exits 3."""
    # Act
    code = main(["stats", str(temp_dir / "missing.amr")])

    # Assert
    assert code == 3
    assert "I/O error" in caplog.text


@pytest.mark.integration
def test_check_conformant_corpus(data_dir, capsys):
    """Test that the printed examples pass the checker."""
    # Act
    code = main(["check", str(data_dir / "guideline_examples.amr")])

    # Assert
    assert code == 0
    assert capsys.readouterr().out == "0 errors, 0 warnings\n"


@pytest.mark.integration
def test_check_reports_violation(temp_dir, capsys):
    """Test that an error finding exits 1 with one tab-separated line."""
    # Arrange
    path = _write(temp_dir, "r5.amr", SHAYAD_AS_ARG)

    # Act
    code = main(["check", path])

    # Assert
    lines = capsys.readouterr().out.splitlines()
    assert code == 1
    assert len(lines) == 2
    assert lines[0].split("\t")[:4] == ["bad1", "R5", "error", "x3"]
    assert lines[1] == "1 errors, 0 warnings"


@pytest.mark.integration
def test_check_rule_selection(temp_dir, capsys):
    """Test that --rules restricts the catalog."""
    # Arrange
    path = _write(temp_dir, "r5.amr", SHAYAD_AS_ARG)

    # Act
    code = main(["check", path, "--rules", "R1"])

    # Assert
    assert code == 0
    assert capsys.readouterr().out == "0 errors, 0 warnings\n"


@pytest.mark.integration
def test_check_warnings_and_strict(temp_dir, capsys):
    """Test that warnings exit 0 unless --strict is given."""
    # Arrange
    path = _write(temp_dir, "r3.amr", VARIANT_LV)

    # Act
    relaxed = main(["check", path])
    strict = main(["check", path, "--strict"])

    # Assert
    out = capsys.readouterr().out
    assert (relaxed, strict) == (0, 1)
    assert "warn1\tR3\twarning\tx\t" in out


@pytest.mark.integration
def test_check_severity_override_and_json(temp_dir, capsys):
    """Test JSON output with a promoted severity."""
    # Arrange
    path = _write(temp_dir, "r3.amr", VARIANT_LV)

    # Act
    code = main(["check", path, "--severity", "R3=error", "--format", "json"])

    # Assert
    data = json.loads(capsys.readouterr().out)
    assert code == 1
    assert data["errors"] == 1 and data["warnings"] == 0
    assert data["records"][0]["diagnostics"][0]["rule"] == "R3"


@pytest.mark.integration
def test_check_unknown_rule_is_usage_error(temp_dir):
    """Test that a bad --rules value exits 2."""
    path = _write(temp_dir, "r3.amr", VARIANT_LV)
    assert main(["check", path, "--rules", "R42"]) == 2


@pytest.mark.integration
def test_check_uses_lexicon_from_environment(temp_dir, capsys):
    """Test that PAMR_LEXICON extends the builtin frames."""
    # Arrange
    path = _write(temp_dir, "cook.amr", "# ::id c1\n(x / pokhtan :ARG0 (m / mâri) :ARG1 (g / ghazâ))\n")
    lexicon = _write(temp_dir, "extra.lex", "FRAME\tpokhtan\tARG0=cook\tARG1=food\n")

    # Act
    without = main(["check", path])
    with patch.dict("os.environ", {"PAMR_LEXICON": lexicon}):
        with_lexicon = main(["check", path])

    # Assert
    assert (without, with_lexicon) == (1, 0)


@pytest.mark.integration
def test_score_file_against_itself(data_dir, capsys):
    """Test that a corpus scores 1.0 against itself."""
    # Arrange
    path = str(data_dir / "guideline_examples.amr")

    # Act
    code = main(["score", path, path])

    # Assert
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[-4:] == ["mode: labeled", "precision: 1.000000", "recall: 1.000000", "f1: 1.000000"]


@pytest.mark.integration
def test_score_derived_pair(data_dir, capsys):
    """Test the hand-derived pair in labeled and unlabeled mode."""
    # Arrange
    a, b = str(data_dir / "derived_a.amr"), str(data_dir / "derived_b.amr")

    # Act
    main(["score", a, b])
    labeled = capsys.readouterr().out
    main(["score", a, b, "--unlabeled"])
    unlabeled = capsys.readouterr().out

    # Assert
    assert labeled.splitlines()[0] == "d1\t3\t4\t4\t0.750000"
    assert "f1: 0.750000" in labeled
    assert "f1: 1.000000" in unlabeled


@pytest.mark.integration
def test_score_json_agrees_with_text(data_dir, capsys):
    """Test that both renderings carry the same numbers."""
    # Arrange
    a, b = str(data_dir / "derived_a.amr"), str(data_dir / "derived_b.amr")

    # Act
    main(["score", a, b])
    text = capsys.readouterr().out
    main(["score", a, b, "--format", "json"])
    data = json.loads(capsys.readouterr().out)

    # Assert
    assert data["mode"] == "labeled"
    assert data["pairs"][0]["id"] == "d1"
    assert f"f1: {data['micro']['f1']:.6f}" in text


@pytest.mark.integration
def test_score_is_deterministic(temp_dir, capsys):
    """Test that repeated runs with one seed print identical output."""
    # Arrange
    concepts = ["xastan", "raftan", "doxtar", "city", "name", "xastan", "raftan", "doxtar", "city"]
    a = _write(temp_dir, "a.amr", _chain_corpus("big", concepts))
    b = _write(temp_dir, "b.amr", _chain_corpus("big", list(reversed(concepts))))

    # Act
    outputs = []
    for _ in range(2):
        main(["score", a, b, "--seed", "13", "--restarts", "4"])
        outputs.append(capsys.readouterr().out)

    # Assert
    assert outputs[0] == outputs[1]
    assert outputs[0].startswith("big\t")


@pytest.mark.integration
def test_score_seed_is_irrelevant_for_small_graphs(data_dir, capsys):
    """Test that exact scoring does not depend on the seed."""
    # Arrange
    path = str(data_dir / "iaa" / "annotator_a.amr")
    other = str(data_dir / "iaa" / "annotator_b.amr")

    # Act
    main(["score", path, other, "--seed", "1"])
    first = capsys.readouterr().out
    main(["score", path, other, "--seed", "99"])

    # Assert
    assert capsys.readouterr().out == first


@pytest.mark.integration
def test_score_mismatched_ids(temp_dir, data_dir, caplog):
    """Test that unaligned ids exit 2 listing them."""
    # Arrange
    other = _write(temp_dir, "other.amr", "# ::id zz\n(a / x :ARG1 (b / y))\n")

    # Act
    code = main(["score", str(data_dir / "derived_a.amr"), other])

    # Assert
    err = caplog.text
    assert code == 2
    assert "d1" in err and "zz" in err


@pytest.mark.integration
def test_score_two_stdin_inputs(capsys):
    """Test that stdin cannot stand for both files."""
    assert main(["score", "-", "-"]) == 2


@pytest.mark.integration
def test_stats_text(data_dir, capsys):
    """Test the statistics report of the printed examples."""
    # Act
    code = main(["stats", str(data_dir / "guideline_examples.amr"), "--top", "3"])

    # Assert
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("sentences: 28\nreentrancies: 3\n")
    assert "lvc_concepts: 10" in out
    assert "concepts:" in out and "roles:" in out


@pytest.mark.integration
def test_stats_json(data_dir, capsys):
    """Test that JSON statistics mirror the report fields."""
    # Act
    main(["stats", str(data_dir / "guideline_examples.amr"), "--format", "json"])

    # Assert
    data = json.loads(capsys.readouterr().out)
    assert set(data) == {"sentence_count", "concepts", "roles", "reentrancy_count",
                         "mean_triples", "median_triples", "lvc_concept_count"}
    assert data["sentence_count"] == 28


@pytest.mark.integration
def test_iaa_identical_files(data_dir, capsys):
    """Test that identical annotator files agree perfectly."""
    # Arrange
    path = str(data_dir / "iaa" / "annotator_a.amr")

    # Act
    code = main(["iaa", path, path, path])

    # Assert
    out = capsys.readouterr().out
    assert code == 0
    assert "average_f1: 1.000000" in out
    assert "shared_ids: 5" in out


@pytest.mark.integration
def test_iaa_three_annotators(data_dir, capsys):
    """Test the hand-computed mean over the three annotator files."""
    # Arrange
    files = [str(data_dir / "iaa" / f"annotator_{x}.amr") for x in "abc"]

    # Act
    code = main(["iaa", *files, "--format", "json"])

    # Assert
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["annotators"] == ["ann_a", "ann_b", "ann_c"]
    expected = (54 / 64 + 52 / 61 + 48 / 63) / 3
    assert data["average_f1"] == pytest.approx(expected, abs=1e-9)


@pytest.mark.integration
def test_iaa_both_modes(data_dir, capsys):
    """Test that --both reports labeled then unlabeled agreement."""
    # Arrange
    files = [str(data_dir / "derived_a.amr"), str(data_dir / "derived_b.amr")]

    # Act
    main(["iaa", *files, "--both"])

    # Assert
    out = capsys.readouterr().out
    assert out.index("mode: labeled") < out.index("mode: unlabeled")
    assert "average_f1: 0.750000" in out
    assert "average_f1: 1.000000" in out


@pytest.mark.integration
def test_iaa_needs_two_files(data_dir):
    """Test that a single annotator file is a usage error."""
    assert main(["iaa", str(data_dir / "derived_a.amr")]) == 2


@pytest.mark.integration
def test_version_flag(capsys):
    """Test that --version prints and exits."""
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert capsys.readouterr().out.startswith("pamr ")


@pytest.mark.slow
@pytest.mark.integration
def test_gold_corpus_sentence_count(data_dir, capsys):
    """Test ingestion of the published gold corpus when it is available locally."""
    # Arrange
    gold = data_dir / "gold" / "pamr_gold.amr"
    if not gold.exists():
        pytest.skip(f"gold corpus not found at {gold}")

    # Act
    code = main(["stats", str(gold)])

    # Assert
    assert code == 0
    assert capsys.readouterr().out.startswith("sentences: 1562\n")
