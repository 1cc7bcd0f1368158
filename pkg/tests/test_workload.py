import pytest

from clustersim.domain import ResourceVector
from clustersim.workload import (SyntheticSpec, Workload, WorkloadError,
                                 generate_synthetic, load_workload,
                                 write_workload)

TASKS_OK = ("task_id,job_id,arrival_s,duration_s,cpu_req,mem_req\n"
            "a,j1,0.0,100.0,2.0,4.0\n"
            "b,j1,5.0,50.0,1.0,2.0\n")
USAGE_OK = ("task_id,offset_s,cpu_use,mem_use\n"
            "a,0.0,1.0,2.0\n"
            "a,60.0,1.5,2.5\n"
            "b,0.0,0.5,1.0\n")


def _write(tmp_path, tasks=TASKS_OK, usage=USAGE_OK):
    tp = tmp_path / "tasks.csv"
    up = tmp_path / "usage.csv"
    tp.write_text(tasks)
    up.write_text(usage)
    return tp, up


class TestLoadWorkload:
    def test_valid_input(self, tmp_path):
        w = load_workload(*_write(tmp_path))
        assert len(w.tasks) == 2
        assert w.demands["a"].value_at(59.9) == ResourceVector(1.0, 2.0)
        assert w.demands["a"].value_at(60.0) == ResourceVector(1.5, 2.5)

    def test_bad_tasks_header(self, tmp_path):
        tp, up = _write(tmp_path, tasks="wrong,header\n")
        with pytest.raises(WorkloadError, match=r"tasks\.csv:1"):
            load_workload(tp, up)

    def test_non_numeric_field_reports_line(self, tmp_path):
        bad = TASKS_OK.replace("5.0,50.0", "oops,50.0")
        tp, up = _write(tmp_path, tasks=bad)
        with pytest.raises(WorkloadError, match=r"tasks\.csv:3.*arrival_s"):
            load_workload(tp, up)

    def test_duplicate_task_id(self, tmp_path):
        dup = TASKS_OK + "a,j2,9.0,10.0,1.0,1.0\n"
        tp, up = _write(tmp_path, tasks=dup)
        with pytest.raises(WorkloadError, match="duplicate task 'a'"):
            load_workload(tp, up)

    def test_usage_for_unknown_task(self, tmp_path):
        tp, up = _write(tmp_path, usage=USAGE_OK + "zz,0.0,1.0,1.0\n")
        with pytest.raises(WorkloadError, match=r"usage\.csv:5.*'zz'"):
            load_workload(tp, up)

    def test_task_without_usage(self, tmp_path):
        tp, up = _write(tmp_path,
                        usage="task_id,offset_s,cpu_use,mem_use\n"
                              "a,0.0,1.0,2.0\n")
        with pytest.raises(WorkloadError, match="without usage: b"):
            load_workload(tp, up)

    def test_usage_offset_outside_lifetime(self, tmp_path):
        tp, up = _write(tmp_path, usage=USAGE_OK + "b,50.0,0.5,1.0\n")
        with pytest.raises(WorkloadError, match="outside task lifetime"):
            load_workload(tp, up)

    def test_nonzero_first_offset(self, tmp_path):
        tp, up = _write(tmp_path,
                        usage="task_id,offset_s,cpu_use,mem_use\n"
                              "a,10.0,1.0,2.0\n"
                              "b,0.0,0.5,1.0\n")
        with pytest.raises(WorkloadError):
            load_workload(tp, up)


class TestRoundTrip:
    def test_write_then_load_is_identity(self, tmp_path):
        spec = SyntheticSpec(n_tasks=200, arrival_rate=2.0, seed=7)
        w = generate_synthetic(spec)
        tp = tmp_path / "t.csv"
        up = tmp_path / "u.csv"
        write_workload(w, tp, up)
        assert load_workload(tp, up) == w

    def test_empty_workload_round_trips(self, tmp_path):
        w = Workload([], {})
        tp = tmp_path / "t.csv"
        up = tmp_path / "u.csv"
        write_workload(w, tp, up)
        assert load_workload(tp, up) == w


class TestSyntheticGenerator:
    def test_same_seed_same_workload(self):
        spec = SyntheticSpec(n_tasks=300, seed=11)
        assert generate_synthetic(spec) == generate_synthetic(spec)

    def test_different_seed_differs(self):
        a = generate_synthetic(SyntheticSpec(n_tasks=300, seed=11))
        b = generate_synthetic(SyntheticSpec(n_tasks=300, seed=12))
        assert a != b

    def test_zero_tasks(self):
        w = generate_synthetic(SyntheticSpec(n_tasks=0))
        assert w.tasks == [] and w.demands == {}

    def test_requests_within_cap_and_positive_durations(self):
        w = generate_synthetic(SyntheticSpec(n_tasks=500, seed=3))
        for t in w.tasks:
            assert 0 < t.request.cpu <= 64.0
            assert 0 < t.request.mem <= 128.0
            assert t.duration >= 1.0

    def test_arrivals_strictly_increasing(self):
        w = generate_synthetic(SyntheticSpec(n_tasks=500, seed=4))
        arr = [t.arrival_time for t in w.tasks]
        assert all(b > a for a, b in zip(arr, arr[1:]))

    def test_mean_demand_ratio_calibrated(self):
        # The per-task ratio plus burst renormalization should keep the
        # average demand/request ratio near the configured mean.
        spec = SyntheticSpec(n_tasks=5000, demand_ratio_mean=0.45,
                             demand_ratio_std=0.2, burst_prob=0.05,
                             burst_scale=3.0, seed=21)
        w = generate_synthetic(spec)
        ratios = []
        for t in w.tasks:
            samples = w.demands[t.task_id].samples
            ratios.append(sum(v.cpu for _, v in samples)
                          / (len(samples) * t.request.cpu))
        mean = sum(ratios) / len(ratios)
        assert 0.40 <= mean <= 0.50

    def test_scale_demands(self):
        w = generate_synthetic(SyntheticSpec(n_tasks=50, seed=5))
        scaled = w.scale_demands(1.5)
        tid = w.tasks[0].task_id
        for (o1, v1), (o2, v2) in zip(w.demands[tid].samples,
                                      scaled.demands[tid].samples):
            assert o1 == o2
            assert v2.cpu == pytest.approx(1.5 * v1.cpu)

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            SyntheticSpec(arrival_rate=0.0)
        with pytest.raises(ValueError):
            SyntheticSpec(burst_scale=0.5)
