"""
Tests for the async MCP service functions
"""
import asyncio

from app.mcp.protocol import MCPErrorCode, MCPErrorResponse, MCPResponse
from app.mcp.service import create_context, program_check, program_fmt, program_run, program_xfunc
from app.models.program import ProgramRequest, RunRequest, RunStatus, XfuncRequest
from tests.conftest import corpus_source


class TestServiceFunctions:
    """Tests for the service layer."""

    def test_context_ids(self):
        """Test a request ID is generated when none is given."""
        assert create_context("fixed").request_id == "fixed"
        assert create_context().request_id != create_context().request_id

    def test_check(self):
        """Test a successful check."""
        response = asyncio.run(program_check(ProgramRequest(source=corpus_source("peano_data.dd")), "r1"))
        assert isinstance(response, MCPResponse)
        assert response.data.ok
        assert response.context.request_id == "r1"

    def test_check_rejected(self):
        """Test a rejected program."""
        request = ProgramRequest(source=corpus_source("neg_reachable_absurd.dd"))
        response = asyncio.run(program_check(request))
        assert isinstance(response, MCPErrorResponse)
        assert response.error.code == MCPErrorCode.PROGRAM_REJECTED
        assert not response.error.details["ok"]

    def test_run(self):
        """Test evaluation."""
        request = RunRequest(source=corpus_source("peano_codata.dd"), expr="S(Z).plus(S(Z))")
        response = asyncio.run(program_run(request))
        assert response.data.status == RunStatus.VALUE
        assert response.data.value == "S(S(Z))"

    def test_run_rejected_expression(self):
        """Test an ill-typed expression is a rejection, not an evaluation failure."""
        request = RunRequest(source=corpus_source("peano_data.dd"), expr="Z.plus(Type)")
        response = asyncio.run(program_run(request))
        assert response.error.code == MCPErrorCode.PROGRAM_REJECTED

    def test_xfunc_report(self):
        """Test the transposition report."""
        request = XfuncRequest(source=corpus_source("stream.dd"), type_name="Stream")
        response = asyncio.run(program_xfunc(request))
        report = response.data.report
        assert report.direction.value == "defunctionalize"
        assert (report.producers, report.consumers, report.cells) == (2, 2, 4)

    def test_xfunc_wrong_type(self):
        """Test a definition name is not a transformable type."""
        request = XfuncRequest(source=corpus_source("peano_data.dd"), type_name="plus")
        response = asyncio.run(program_xfunc(request))
        assert response.error.code == MCPErrorCode.INVALID_PARAMETER

    def test_fmt_rejected(self):
        """Test formatting a program with an unbound name."""
        response = asyncio.run(program_fmt(ProgramRequest(source="let x: Nat := Z;")))
        assert response.error.code == MCPErrorCode.PROGRAM_REJECTED


class TestStdioTools:
    """Tests for the tools of the stdio MCP server."""

    def test_check_tool(self):
        """Test the check tool reports lifted declarations."""
        from toolchain_mcp_server import check_program

        text = asyncio.run(check_program(corpus_source("functions.dd"), prelude=False))
        assert text.startswith("Program typechecks")
        assert "twice_comatch_1" in text

    def test_run_tool(self):
        """Test the run tool prints the value and step count."""
        from toolchain_mcp_server import run_program

        text = asyncio.run(run_program(corpus_source("bool_data.dd"), "True.neg"))
        assert text.splitlines() == ["False", "(1 steps)"]

    def test_transpose_tool_rejects_prelude_type(self):
        """Test the transpose tool explains why a type cannot be transformed."""
        from toolchain_mcp_server import transpose_type

        text = asyncio.run(transpose_type(corpus_source("bool_data.dd"), "Fun"))
        assert text.startswith("Cannot transform Fun")
