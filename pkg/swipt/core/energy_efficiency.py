"""
Energy efficiency of the harvest-then-transmit protocol and its maximization over the power splitting factor ρ and
the downlink fraction β.

For fixed ρ the efficiency is a ratio of affine functions of β, so it is monotone in β: increasing where
c_dl > T c_ul and decreasing where c_dl < T c_ul, with T the ratio threshold. The optimum therefore lies on the
boundary β = β_min(ρ) or β = β_max of the feasible region.
"""
import dataclasses

import numpy
import scipy.optimize

from swipt.core.exceptions import SWIPTInfeasibleException, SWIPTOptimizationException, SWIPTValueException
from swipt.core.harvest import mean_received_power, outage_energy_harvesting
from swipt.core.link_rates import link_rates
from swipt.models import EEBranch, EEResult, FeasibleSets, RatePair
from swipt.utils.constants import NATS_PER_BIT, VERIFICATION_GRID
from swipt.utils.log import LoggingMixin

RHO_CEILING = 1.0 - 1e-6


def _as_rates(rates):
    if isinstance(rates, RatePair):
        return rates
    c_dl, c_ul = rates
    return RatePair(float(c_dl), float(c_ul))


def power_consumption(beta, p):
    """ Average power β Σϑ_m P_m + Σϑ_m P_m,on + (1-β)Q drawn by the network and the typical user, in watts. """
    transmit = numpy.dot(p.theta, p.powers)
    hardware = numpy.dot(p.theta, p.network.hardware_powers)
    return beta * transmit + hardware + (1.0 - beta) * p.swipt.user_power


def energy_efficiency(rho, beta, p, rates=None, rate_model=None):
    """
    Energy efficiency [β c_dl + (1-β) c_ul] / (ln 2 [β Σϑ_m P_m + Σϑ_m P_m,on + (1-β)Q]) in bits/joule.

    Args:
        rho (float): power splitting factor in (0, 1)
        beta (float): downlink fraction in (0, 1)
        p (HarvestParams): parameters
        rates (RatePair or tuple): rates (c_dl, c_ul) in nats/Hz at rho; computed from rate_model if omitted
        rate_model (callable): maps rho to the rates, defaults to :class:`LinkRateModel`

    Returns:
        float: efficiency in bits/joule
    """
    if not (0 < rho < 1 and 0 < beta < 1 + 1e-12):
        raise SWIPTValueException(f"ρ and β must lie in (0, 1), got {rho} and {beta}")
    if rates is None:
        rates = (rate_model or LinkRateModel(p))(rho)
    rates = _as_rates(rates)
    numerator = beta * rates.c_dl + (1.0 - beta) * rates.c_ul
    return float(numerator / (NATS_PER_BIT * power_consumption(beta, p)))


def ratio_threshold(p):
    """ T = 1 + Σϑ_m (P_m - Q) / (Σϑ_m P_m,on + Q) """
    q = p.swipt.user_power
    return float(1.0 + numpy.dot(p.theta, p.powers - q) / (numpy.dot(p.theta, p.network.hardware_powers) + q))


def fractional_slope_sign(a, b, c, d):
    """
    Sign of d/dβ (aβ + b)/(cβ + d), which is the sign of ad - bc.
    """
    return float(numpy.sign(a * d - b * c))


class LinkRateModel:
    """
    Rates as a function of ρ from the analytical bounds, cached per ρ.
    """
    def __init__(self, p, method='auto', receive_gain='unnormalized', interference='normalized'):
        self.p = p
        self.method = method
        self.receive_gain = receive_gain
        self.interference = interference
        self._cache = {}

    def __call__(self, rho):
        key = round(float(rho), 12)
        if key not in self._cache:
            params = self.p.with_swipt(power_split=key)
            self._cache[key] = link_rates(params, method=self.method, receive_gain=self.receive_gain,
                                           interference=self.interference)
        return self._cache[key]


def feasible_sets(p, outage_model=None, xtol=1e-4, method='auto'):
    """
    Feasible region of the maximization.

    ρ must satisfy ρ ≥ ρ_min, the harvesting-outage constraint ε_eh(ρ) ≤ ε_eh,max and ρ ≤ ρ_max(β_max), where
    ρ_max(β) = 1 - (1-β)Q/(ηβE[P_dl]) is the largest ρ whose mean harvested energy covers the uplink. For a given ρ,
    β ranges over [Q/(Q + η(1-ρ)E[P_dl]), β_max]. ε_eh increases with ρ, so the outage bound is found by bisection.

    Args:
        p (HarvestParams): parameters
        outage_model (callable): maps ρ to ε_eh, defaults to the analytical outage bound
        xtol (float): interval tolerance of the bisection on ρ

    Returns:
        FeasibleSets: the region, with a reason when it is empty
    """
    s = p.swipt
    if outage_model is None:
        outage_model = lambda rho: outage_energy_harvesting(p.with_swipt(power_split=rho), method=method)
    sets = FeasibleSets(rho_lower=s.rho_min, rho_upper=s.rho_min, beta_max=s.beta_max,
                        mean_received_power=mean_received_power(p), conversion_efficiency=s.conversion_efficiency,
                        user_power=s.user_power)
    rho_sustain = float(sets.rho_max(s.beta_max))
    if rho_sustain < s.rho_min:
        return dataclasses.replace(sets, rho_upper=rho_sustain, rho_sustain=rho_sustain,
                                   reason=f"self-sustainability needs ρ <= {rho_sustain:.4g} < ρ_min")
    upper = min(rho_sustain, RHO_CEILING)

    def excess(rho):
        return outage_model(rho) - s.max_eh_outage

    if excess(s.rho_min) > 0:
        return dataclasses.replace(sets, rho_sustain=rho_sustain,
                                   reason=f"harvesting outage exceeds {s.max_eh_outage} already at ρ_min")
    if excess(upper) <= 0:
        rho_outage = upper
    else:
        rho_outage = scipy.optimize.bisect(excess, s.rho_min, upper, xtol=xtol)
    return dataclasses.replace(sets, rho_upper=min(rho_outage, upper), rho_outage=rho_outage,
                               rho_sustain=rho_sustain)


class Optimizer(LoggingMixin):
    """
    Maximizes the energy efficiency over the feasible region and verifies the result on a brute-force grid.

    Args:
        p (HarvestParams): parameters
        rate_model (callable): maps ρ to the rates (c_dl, c_ul) in nats/Hz, defaults to :class:`LinkRateModel`
        outage_model (callable): maps ρ to ε_eh, defaults to the analytical outage bound
        grid_points (int): points per axis of the verification grid
        xtol (float): tolerance on ρ of root finding and line searches
        scan_points (int): points of the coarse scan that brackets the line search
        tolerance (float): allowed shortfall against the verification grid, relative to max(1, grid maximum)
        interference (str): downlink interference form of the default rate model
    """
    def __init__(self, p, rate_model=None, outage_model=None, grid_points=VERIFICATION_GRID, xtol=1e-4,
                 scan_points=21, tolerance=1e-6, method='auto', interference='normalized'):
        self.p = p
        self.rate_model = rate_model or LinkRateModel(p, interference=interference)
        self.outage_model = outage_model
        self.grid_points = grid_points
        self.xtol = xtol
        self.scan_points = scan_points
        self.tolerance = tolerance
        self.method = method
        self.threshold = ratio_threshold(p)

    def rates(self, rho):
        return _as_rates(self.rate_model(rho))

    def zeta(self, rho, beta):
        return energy_efficiency(rho, beta, self.p, rates=self.rates(rho))

    def ratio_gap(self, rho):
        """ c_dl(ρ) - T c_ul(ρ), positive where the efficiency increases with β. """
        r = self.rates(rho)
        return r.c_dl - self.threshold * r.c_ul

    def feasible_sets(self):
        return feasible_sets(self.p, outage_model=self.outage_model, xtol=self.xtol, method=self.method)

    def partition(self, sets):
        """
        Splits [ρ_lower, ρ_upper] into the part where c_dl < T c_ul and the part where c_dl > T c_ul.

        Returns:
            tuple: (under, over) intervals as (lo, hi) tuples or None
        """
        lo, hi = sets.rho_lower, sets.rho_upper
        g_lo, g_hi = self.ratio_gap(lo), self.ratio_gap(hi)
        r_lo = self.rates(lo)
        scale = max(abs(r_lo.c_dl), self.threshold * abs(r_lo.c_ul), 1e-300)
        if abs(g_lo) <= 1e-12 * scale and abs(g_hi) <= 1e-12 * scale:
            return None, None
        if g_lo <= 0 and g_hi <= 0:
            return (lo, hi), None
        if g_lo >= 0 and g_hi >= 0:
            return None, (lo, hi)
        root = scipy.optimize.bisect(self.ratio_gap, lo, hi, xtol=self.xtol)
        if g_lo < 0:
            return (lo, root), (root, hi)
        return (root, hi), (lo, root)

    def _best_on(self, interval, objective, prefer):
        lo, hi = interval
        if hi - lo <= self.xtol:
            candidates = [prefer]
        else:
            scan = numpy.linspace(lo, hi, self.scan_points)
            values = [objective(r) for r in scan]
            i = int(numpy.argmax(values))
            bracket = (scan[max(i - 1, 0)], scan[min(i + 1, len(scan) - 1)])
            res = scipy.optimize.minimize_scalar(lambda r: -objective(r), bounds=bracket, method='bounded',
                                                 options={'xatol': self.xtol / 10.0})
            candidates = [prefer] + list(scan) + [float(res.x)]
        values = numpy.array([objective(r) for r in candidates])
        # the boundary point named by the monotonicity argument wins ties
        best = int(numpy.argmax(values))
        if values[0] >= values[best] - 1e-12 * max(1.0, abs(values[best])):
            best = 0
        return float(candidates[best]), float(values[best])

    def verification_grid(self, sets):
        """
        Largest efficiency over a grid of ρ in the feasible interval and β in [β_min(ρ_lower), β_max], restricted to
        feasible pairs.
        """
        rhos = numpy.linspace(sets.rho_lower, sets.rho_upper, self.grid_points)
        betas = numpy.linspace(sets.beta_lower, sets.beta_max, self.grid_points)
        best = -numpy.inf
        for rho in rhos:
            for beta in betas[betas >= sets.beta_min(rho) - 1e-12]:
                best = max(best, self.zeta(rho, min(beta, sets.beta_max)))
        return float(best)

    def surface(self, rhos, betas):
        """ Efficiency on the product grid rhos × betas, shape (len(rhos), len(betas)). """
        return numpy.array([[self.zeta(rho, beta) for beta in betas] for rho in rhos])

    def optimize(self, raise_on_infeasible=True):
        """
        Returns:
            EEResult: the maximum and where it occurs
        """
        sets = self.feasible_sets()
        if sets.empty:
            if raise_on_infeasible:
                raise SWIPTInfeasibleException(f"energy-efficiency problem is infeasible: {sets.reason}")
            nan = float('nan')
            return EEResult(nan, nan, nan, EEBranch.INFEASIBLE, sets, ratio_threshold=self.threshold)
        under, over = self.partition(sets)
        beta_max = sets.beta_max
        candidates = []
        if under is not None:
            rho, value = self._best_on(under, lambda r: self.zeta(r, float(sets.beta_min(r))), under[0])
            candidates.append((value, rho, float(sets.beta_min(rho)), EEBranch.UNDERLINE_SET))
        if over is not None:
            rho, value = self._best_on(over, lambda r: self.zeta(r, beta_max), over[1])
            candidates.append((value, rho, beta_max, EEBranch.OVERLINE_SET))
        if not candidates:
            rho = sets.rho_lower
            beta = float(sets.beta_min(rho))
            candidates.append((self.zeta(rho, beta), rho, beta, EEBranch.NEITHER_SET_NONEMPTY))
        zeta_star, rho_star, beta_star, branch = max(candidates, key=lambda c: c[0])
        grid_max = self.verification_grid(sets)
        if zeta_star < grid_max - self.tolerance * max(1.0, abs(grid_max)):
            raise SWIPTOptimizationException(
                f"optimum {zeta_star:.6g} at (ρ={rho_star:.4f}, β={beta_star:.4f}) is beaten by the verification "
                f"grid maximum {grid_max:.6g}; the efficiency is not monotone as assumed"
            )
        rates = self.rates(rho_star)
        self.log.info(f"maximum energy efficiency {zeta_star:.6g} bits/J at ρ={rho_star:.4f}, β={beta_star:.4f} "
                      f"({branch.value})")
        return EEResult(rho_star=rho_star, beta_star=beta_star, zeta_star=zeta_star, branch=branch,
                        feasible_sets=sets, c_dl=rates.c_dl, c_ul=rates.c_ul, ratio_threshold=self.threshold,
                        grid_max=grid_max)


def optimize(p, rate_model=None, outage_model=None, raise_on_infeasible=True, **kwargs):
    """
    Maximum energy efficiency over the feasible (ρ, β) region.

    Args:
        p (HarvestParams): parameters
        rate_model (callable): maps ρ to (c_dl, c_ul), defaults to the analytical rate bounds
        outage_model (callable): maps ρ to ε_eh, defaults to the analytical outage bound
        raise_on_infeasible (bool): raise instead of returning an infeasible result

    Returns:
        EEResult: optimum, branch, feasible sets and diagnostics
    """
    return Optimizer(p, rate_model=rate_model, outage_model=outage_model, **kwargs).optimize(
        raise_on_infeasible=raise_on_infeasible)
