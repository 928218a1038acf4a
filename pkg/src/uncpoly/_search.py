"""Search primitives shared by the supremum routines.

Every routine maximizes a *batched* objective: a callable taking an
``(B, q)`` array of parameters and returning ``(B,)`` values.  Results only
ever improve on their starting points, which keeps the reported suprema
monotone in the budget.
"""
import numpy as np

from .kernels import torus_steps

# ties within this relative band go to the earliest candidate
_TIE_RTOL = 1e-12


def pick_first_max(values):
    values = np.asarray(values)
    top = values.max()
    return int(np.flatnonzero(values >= top - _TIE_RTOL * abs(top))[0])


def evaluate_chunked(objective, params, chunk=1 << 14):
    params = np.asarray(params)
    if len(params) <= chunk:
        return objective(params)
    return np.concatenate([objective(params[s:s + chunk]) for s in range(0, len(params), chunk)])


def coordinate_refine(objective, theta, h, span=4, max_sweeps=50, first=1):
    """Cyclic coordinate search on a lattice of step ``h`` around ``theta``.

    Coordinates before ``first`` stay fixed (the pinned angle).
    """
    theta = np.array(theta, dtype=float)
    offsets = h * np.arange(-span, span + 1)
    best = float(objective(theta[None])[0])
    for _ in range(max_sweeps):
        moved = False
        for j in range(first, theta.size):
            cand = np.repeat(theta[None], offsets.size, axis=0)
            cand[:, j] += offsets
            vals = objective(cand)
            i = int(np.argmax(vals))
            if vals[i] > best * (1 + 1e-15) + 1e-300:
                best = float(vals[i])
                theta = cand[i]
                moved = True
        if not moved:
            break
    return theta, best


def torus_search(objective, n, points, rounds, grid_cap, starts=None, grid_values=None,
                 polish_iterations=200, fd_step=1e-5):
    """Maximize ``objective`` over angle vectors with angle 0 pinned to zero.

    Full grid of ``points`` per free angle when it fits in ``grid_cap``,
    otherwise coordinate search from ``starts``.  Then ``rounds`` rounds of
    4x local refinement and a finite-difference ascent polish.  Returns
    ``(theta, value, resolution)`` where ``resolution`` is the final lattice
    step.
    """
    h = 2 * np.pi / points
    if n == 1:
        theta = np.zeros(1)
        return theta, float(objective(theta[None])[0]), 0.0
    if points ** (n - 1) <= grid_cap:
        if grid_values is None:
            idx = np.arange(points ** (n - 1))
            grid_values = evaluate_chunked(lambda ix: objective(h * torus_steps(ix, n, points)), idx)
        i = pick_first_max(grid_values)
        candidates = [h * torus_steps([i], n, points)[0]]
    else:
        candidates = []
        for s in starts if starts is not None else [np.zeros(n)]:
            s = np.array(s, dtype=float)
            s[0] = 0.0
            s = np.round(s / h) * h
            candidates.append(coordinate_refine(objective, s, h)[0])
    best_theta, best = None, -np.inf
    for theta in candidates:
        step = h
        for _ in range(rounds):
            step /= 4
            theta, _ = coordinate_refine(objective, theta, step)
        if polish_iterations:
            theta = _polish(objective, theta, step, polish_iterations, fd_step)
        val = float(objective(theta[None])[0])
        if val > best:
            best_theta, best = theta, val
    resolution = h / 4 ** rounds
    return best_theta, best, resolution


def _polish(objective, theta, step, iterations, fd_step):
    def free(t):
        return objective(np.concatenate([np.zeros((len(t), 1)), t], axis=1))

    x, _ = multistart_ascent(free, theta[None, 1:], lambda z: z, iterations, fd_step, init_step=step)
    return np.concatenate([[0.0], x[0]])


def multistart_ascent(objective, starts, project, iterations, fd_step, init_step=0.5):
    """Projected ascent with central finite-difference gradients.

    Each start keeps its own step length: grown on success, halved on
    failure.  Only improving moves are accepted.  Returns ``(x, values)``.
    """
    x = project(np.array(starts, dtype=float))
    if x.size == 0:
        return x, np.empty(0)
    s, q = x.shape
    fx = objective(x)
    eta = np.full(s, init_step)
    shift = fd_step * np.eye(q)
    for _ in range(iterations):
        active = np.flatnonzero(eta > 1e-10)
        if active.size == 0:
            break
        xa = x[active]
        probes = np.concatenate([xa[:, None, :] + shift, xa[:, None, :] - shift], axis=1)
        vals = objective(probes.reshape(-1, q)).reshape(active.size, 2, q)
        grad = (vals[:, 0] - vals[:, 1]) / (2 * fd_step)
        gnorm = np.linalg.norm(grad, axis=1)
        flat = gnorm == 0
        eta[active[flat]] = 0.0
        keep = ~flat
        if not keep.any():
            continue
        act = active[keep]
        cand = project(x[act] + eta[act, None] * grad[keep] / gnorm[keep, None])
        fc = objective(cand)
        better = fc > fx[act]
        x[act[better]] = cand[better]
        fx[act[better]] = fc[better]
        eta[act[better]] = np.minimum(eta[act[better]] * 1.5, 2.0)
        eta[act[~better]] *= 0.5
    return x, fx
