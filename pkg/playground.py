# -*- coding: utf-8 -*-
from hermrbc import HermRBC


def curvature(hermrbc: HermRBC):
    """ curvature at a point """
    print("------------- curvature playground ------------")
    result = hermrbc.curvature.evaluate("example_2_2", [0, 0], params={"eps": 0.3}, directions=5)
    print(result["results"]["curvature"]["R_unitary"])
    print(hermrbc.curvature.evaluate(
        "fubini_study_affine", [0.2, 0.1j], params={"n": 2}, directions=20, output="pandas"
    ))
    print("--------------- --------------- ---------------")


def certify(hermrbc: HermRBC):
    """ certification """
    print("------------- certify playground --------------")
    result = hermrbc.certify.point("example_2_2", [0, 0], "nonneg", params={"eps": 0.3})
    print(result["results"]["verdict"]["status"], result["results"]["verdict"]["witness_value"])
    result = hermrbc.certify.scan(
        "example_2_3", 0.05, points=8, cond="pos", params={"b": 1},
        output="pandas:./scan.csv", writer={
            "change:columns": {"index": "point_index", "status": "verdict", "best_min": "minimum"},
            "change:reorder": True, "change:reindex": "point_index"
        }
    )
    print(result)
    print("--------------- --------------- ---------------")


def verify(hermrbc: HermRBC):
    """ identities """
    print("-------------- verify playground --------------")
    print(hermrbc.montecarlo.fs_moment(2, [[1, 1, 2, 2], [1, 2, 2, 1]], output="pandas"))
    result = hermrbc.schwarz.report("fs", "example_2_2_dual", "identity", count=4, params={"n": 2, "eps": 0.3})
    print(result["results"]["schwarz"]["max_bochner_residual"])
    print("--------------- --------------- ---------------")


with HermRBC("threads", args={"samples": 20000, "starts": 8}, log=2) as client:
    curvature(client)
    certify(client)
    verify(client)
