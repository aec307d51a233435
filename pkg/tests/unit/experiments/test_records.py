from fractions import Fraction

from marketeq.experiments.records import ExperimentRecord, SurvivalPoint


def test_stability_csv():
    """Test that rationals become 12-digit decimals followed by exact columns"""
    record = ExperimentRecord(
        id="D1-00001", n=5, types=2, total_weight=30, d=2, delta=Fraction(3, 2), pspe=True
    )
    assert record.csv_header() == ["id", "n", "types", "W", "d", "delta", "h", "pspe", "delta_exact", "h_exact"]
    assert record.csv_row() == ["D1-00001", "5", "2", "30", "2", "1.5", "", "1", "3/2", ""]


def test_revenue_csv():
    """Test that random valuations are labelled rand and power ones by their exponent"""
    record = ExperimentRecord(id="D3-00000", study="revenue", r_min=Fraction(1, 3), r_max=Fraction(1), r0=Fraction(2, 3))
    assert record.csv_row() == ["D3-00000", "rand", "0.333333333333", "1", "0.666666666667", "1/3", "1", "2/3"]
    record.alpha = Fraction(3, 10)
    assert record.csv_row()[1] == "3/10"
    assert record.table_name == "revenue"


def test_to_row():
    """Test that stored rows keep rationals exact"""
    record = ExperimentRecord(id="x", weights=[2, 3], h=Fraction(1, 7), profile=[2, 3])
    row = record.to_row()
    assert row["h"] == "1/7"
    assert row["weights"] == [2, 3]
    assert row["delta"] is None
    assert set(row) == set(record.table_columns)


def test_survival_order():
    """Test that the overall stratum comes first, then gaps in numeric order"""
    points = [
        SurvivalPoint(Fraction(1, 10), Fraction(1), "10"),
        SurvivalPoint(Fraction(0), Fraction(1, 2), "2"),
        SurvivalPoint(Fraction(1, 10), Fraction(1, 2), "all"),
        SurvivalPoint(Fraction(0), Fraction(1, 4), "all"),
    ]
    ordered = sorted(points, key=lambda p: p.sort_key)
    assert [(p.d_stratum, p.h_threshold) for p in ordered] == [
        ("all", 0),
        ("all", Fraction(1, 10)),
        ("2", 0),
        ("10", Fraction(1, 10)),
    ]
    assert ordered[0].csv_row() == ["0", "0.25", "all", "0", "1/4"]
