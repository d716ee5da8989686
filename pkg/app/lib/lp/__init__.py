from app.lib.lp.simplex import LinearProgram, LpResult, LpStatus, check_feasible, solve_lp

__all__ = ["LinearProgram", "LpResult", "LpStatus", "check_feasible", "solve_lp"]
