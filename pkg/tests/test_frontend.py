import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circuits import DEUTERON, THETA

from mirrorc.frontend import CompileError, compile_source, format_program, parse, parse_source, tokenize
from mirrorc.frontend.ast import GateCall, Include, KernelDef, KernelInvoke, Measure, QubitDecl, walk
from mirrorc.ir import Instruction, Kind, Ref

HEADER = 'OPENQASM 3;\ninclude "stdgates.inc";\n'


class TestTokenize:
    def test_gate_call(self):
        toks = tokenize("ry(theta) q[1];")
        assert [repr(t) for t in toks] == [
            "ident ry", "lparen", "ident theta", "rparen", "ident q", "lbracket", "int 1", "rbracket", "semi",
        ]

    def test_empty(self):
        assert tokenize("") == []

    def test_comment_dropped(self):
        assert [t.text for t in tokenize("x q[0]; // comment")] == ["x", "q", "[", "0", "]", ";"]

    def test_keywords_and_numbers(self):
        toks = tokenize("OPENQASM 3; float[64] 1.5e-3 measure")
        assert [t.kind for t in toks] == ["keyword", "int", "semi", "keyword", "lbracket", "int", "rbracket",
                                          "float", "keyword"]

    def test_illegal_character_has_span(self):
        with pytest.raises(CompileError) as err:
            tokenize("x q[0];\n  $")
        d = err.value.diagnostics[0]
        assert (d.line, d.column) == (2, 3)
        assert err.value.format("f.qasm") == "f.qasm:2:3: error: illegal character '$'"

    def test_spans_track_lines(self):
        toks = tokenize("a\n  bb")
        assert (toks[1].line, toks[1].column, toks[1].end_column) == (2, 3, 5)


class TestParse:
    def test_deuteron_structure(self):
        root = parse_source(DEUTERON.read_text())
        assert root.version == "3"
        assert [s.path for s in root.includes] == ["stdgates.inc"]
        (kdef,) = root.kernels
        assert kdef.name == "ansatz"
        assert [(p.name, p.type_name, p.width) for p in kdef.params] == [("theta", "float", 64)]
        assert [(a.name, a.size) for a in kdef.qubit_args] == [("q", 2)]
        kinds = [type(s).__name__ for s in kdef.body]
        assert kinds == ["ClassicalDecl", "GateCall", "GateCall", "GateCall", "GateCall", "Measure"]
        assert [(d.name, d.size) for d in root.qubit_decls] == [("q", 2)]
        invoke = root.statements[-1]
        assert isinstance(invoke, KernelInvoke)
        assert invoke.name == "ansatz" and invoke.args[0].value == THETA

    def test_header_only(self):
        root = parse_source("OPENQASM 3;")
        assert root.kernels == [] and root.statements == ()

    def test_missing_semicolon_reports_brace(self):
        with pytest.raises(CompileError) as err:
            parse_source("def f() qubit[1]:q { x q[0] }")
        d = err.value.diagnostics[0]
        assert (d.line, d.column) == (1, 29)
        assert "expected ';'" in d.message and "'}'" in d.message

    def test_rejects_other_version(self):
        with pytest.raises(CompileError, match="version 2.0"):
            parse_source("OPENQASM 2.0;")

    def test_accepts_three_point_zero(self):
        assert parse_source("OPENQASM 3.0;").version == "3.0"

    def test_unexpected_eof(self):
        with pytest.raises(CompileError, match="end of input"):
            parse_source("OPENQASM 3; x q[0]")

    def test_measure_forms(self):
        root = parse_source("c[1] = measure q[0]; measure q -> c; measure q;")
        assert all(isinstance(s, Measure) for s in root.statements)
        assert str(root.statements[0].target) == "c[1]"
        assert root.statements[2].target is None

    def test_expressions(self):
        (call,) = parse_source("rz(-pi/2 + 2*theta) q[0];").statements
        assert isinstance(call, GateCall)
        env = {"theta": 0.25}
        import math
        assert call.args[0].evaluate(env) == pytest.approx(-math.pi / 2 + 0.5)

    def test_spans_are_monotone(self):
        root = parse_source(DEUTERON.read_text())
        for node in walk(root):
            for child in getattr(node, "body", ()) + getattr(node, "statements", ()):
                assert node.span.contains(child.span)
            for child in getattr(node, "operands", ()):
                assert node.span.contains(child.span)

    def test_round_trip_deuteron(self):
        root = parse_source(DEUTERON.read_text())
        assert parse_source(format_program(root)) == root


_names = st.sampled_from(["a", "b", "qr", "reg"])


@st.composite
def programs(draw):
    from mirrorc.frontend.ast import Barrier, ClassicalDecl, Operand, ParamDecl, Program, QubitArg, Reset
    from mirrorc.ir import BinOp, Neg, Num

    exprs = st.recursive(
        st.one_of(st.floats(0, 10, allow_nan=False).map(Num), st.just(Ref("pi")), st.just(Ref("t"))),
        lambda inner: st.one_of(
            inner.map(Neg), st.tuples(st.sampled_from("+-*/"), inner, inner).map(lambda x: BinOp(*x))
        ),
        max_leaves=4,
    )
    operands = st.builds(Operand, st.just("q"), st.one_of(st.none(), st.integers(0, 3)))
    stmt = st.one_of(
        st.builds(GateCall, st.sampled_from(["x", "h", "cx"]), st.just(()), st.lists(operands, min_size=1, max_size=2).map(tuple)),
        st.builds(GateCall, st.just("rz"), st.tuples(exprs), st.tuples(operands)),
        st.builds(Measure, operands, st.one_of(st.none(), st.builds(Operand, st.just("c"), st.integers(0, 3)))),
        st.builds(Barrier, st.lists(operands, max_size=2).map(tuple)),
        st.builds(Reset, operands),
        st.builds(ClassicalDecl, _names, st.integers(1, 4)),
    )
    body = draw(st.lists(stmt, max_size=5))
    kdef = KernelDef("k", (ParamDecl("t"),), (QubitArg("q", 4),), tuple(body))
    top = draw(st.lists(st.one_of(st.builds(QubitDecl, _names, st.integers(1, 4)), stmt.filter(lambda s: not isinstance(s, GateCall) or s.name != "rz")), max_size=4))
    return Program(draw(st.sampled_from(["3", "3.0", None])), (Include("stdgates.inc"), kdef, *top))


@settings(max_examples=200, deadline=None)
@given(programs())
def test_print_parse_round_trip(program):
    assert parse_source(format_program(program)) == program


class TestBuildIR:
    def test_deuteron_module(self, deuteron_module):
        m = deuteron_module
        assert [k.name for k in m.kernels] == ["ansatz", "main"]
        assert m.entry == "main"
        main = m.entry_kernel
        assert [i.kind for i in main.instructions] == [Kind.ALLOC, Kind.CALL]
        assert main.instructions[0].qubits == (0, 1)
        call = main.instructions[1]
        assert call.name == "ansatz" and call.angles == (THETA,) and call.qubits == (0, 1)
        ansatz = m["ansatz"]
        assert ansatz.params == ("theta",)
        assert ansatz.instructions[1] == Instruction.gate("ry", 1, angles=(Ref("theta"),))

    def test_register_broadcast(self):
        m = compile_source(HEADER + "qubit q[2]; h q;")
        assert list(m.entry_kernel.instructions[1:]) == [Instruction.gate("h", 0), Instruction.gate("h", 1)]

    def test_broadcast_two_qubit(self):
        m = compile_source(HEADER + "qubit a[2]; qubit b[2]; cx a, b[1];")
        assert [i.qubits for i in m.entry_kernel.gates] == [(0, 3), (1, 3)]

    def test_measure_broadcast(self):
        m = compile_source(HEADER + "qubit q[2]; bit c[2]; c = measure q;")
        ms = [i for i in m.entry_kernel.instructions if i.kind is Kind.MEASURE]
        assert [(i.qubits[0], i.clbit) for i in ms] == [(0, 0), (1, 1)]

    @pytest.mark.parametrize(
        "src, message",
        [
            ("qubit q[2]; cx q[1], q[5];", "qubit index out of range"),
            ("qubit q[2]; foo q[0];", "undefined gate 'foo'"),
            ("qubit q[2]; h r;", "undefined identifier 'r'"),
            ("qubit q[2]; cx q[0];", "takes 2 qubit(s)"),
            ("qubit q[2]; rx q[0];", "takes 1 angle(s)"),
            ("qubit q[2]; rx(theta) q[0];", "undefined identifier 'theta'"),
            ("qubit q[2]; cx q[0], q[0];", "duplicate qubit"),
            ("qubit a[2]; qubit b[3]; cx a, b;", "size mismatch"),
            ("def main() qubit:q { x q; }", "reserved"),
        ],
    )
    def test_errors(self, src, message):
        with pytest.raises(CompileError, match=message.replace("(", r"\(").replace(")", r"\)")):
            compile_source(HEADER + src)

    def test_gates_need_stdgates(self):
        with pytest.raises(CompileError, match="missing include"):
            compile_source("OPENQASM 3; qubit q[1]; x q[0];")

    def test_other_include_rejected(self):
        with pytest.raises(CompileError, match="cannot include"):
            compile_source('OPENQASM 3; include "qelib1.inc";')

    def test_reset_parses(self):
        m = compile_source(HEADER + "qubit q[1]; reset q[0];")
        assert m.entry_kernel.instructions[-1].kind is Kind.RESET

    def test_error_positions(self):
        with pytest.raises(CompileError) as err:
            compile_source(HEADER + "qubit q[2];\ncx q[1], q[5];")
        d = err.value.diagnostics[0]
        assert (d.line, d.column) == (4, 10)

    def test_exactly_one_entry(self):
        for src in ["", "qubit q[1];", "def f() qubit:q { x q; } qubit r[1]; f r;"]:
            m = compile_source(HEADER + src)
            assert sum(k.name == m.entry for k in m.kernels) == 1
