"""
Curvas de garantia (delta x eta) e calculadoras de complexidade amostral
"""

from dataclasses import dataclass, field
from enum import Enum
from math import ceil, e, log, sqrt
from typing import Any, Iterable

import numpy as np
import pandas as pd
from scipy.optimize import bisect

from samusic.analysis import rho_lower_bound
from samusic.exceptions import InvalidInputError
from samusic.logger import get_logger

logger = get_logger('guarantees')

BISECT_XTOL = 1e-12
CEIL_RTOL = 1e-12
CURVE_PARAMS = frozenset({'s', 'r', 'rho', 'n', 'N', 'epsilon'})


class Regime(str, Enum):
    """Regimes de garantia"""
    MUSIC_FULL_RANK = 'music_full_rank'
    SA_MUSIC_ORACLE = 'sa_music_oracle'
    SA_MUSIC_SSOMP = 'sa_music_ssomp'
    SA_MUSIC_SSOMSP = 'sa_music_ssomsp'
    SSOMSP_ORACLE = 'ssomsp_oracle'
    MBP = 'mbp'


# Parametros aceitos por eta_bound em cada regime
REGIME_PARAMS: dict[Regime, frozenset[str]] = {
    Regime.MUSIC_FULL_RANK: frozenset(),
    Regime.SA_MUSIC_ORACLE: frozenset(),
    Regime.SA_MUSIC_SSOMP: frozenset({'s', 'r', 'rho'}),
    Regime.SA_MUSIC_SSOMSP: frozenset({'s', 'r'}),
    Regime.SSOMSP_ORACLE: frozenset(),
    Regime.MBP: frozenset({'n', 'N', 'epsilon'}),
}


class MeasurementEnsemble(str, Enum):
    """Ensembles com condicao suficiente de complexidade amostral"""
    GAUSSIAN = 'gaussian'
    GAUSSIAN_ASYMMETRIC = 'gaussian_asymmetric'
    GAUSSIAN_UNIFORM = 'gaussian_uniform'
    FOURIER = 'fourier'
    UNTF = 'untf'
    UNTF_UNIFORM = 'untf_uniform'


def _robust_ceil(x: float) -> int:
    """Teto inteiro tolerante a ruido de ponto flutuante em valores quase inteiros"""
    nearest = round(x)
    if abs(x - nearest) <= CEIL_RTOL * max(1.0, abs(x)):
        return int(nearest)
    return int(ceil(x))


def _unit_interval(name: str, value: float, closed_low: bool = False):
    low_ok = value >= 0 if closed_low else value > 0
    if not (low_ok and value < 1):
        bracket = '[0, 1)' if closed_low else '(0, 1)'
        raise InvalidInputError(f"{name}={value} fora de {bracket}", {name: value})


def _music_eta(delta: float) -> float:
    return (1 - sqrt(delta)) / 2


def _ssomsp_eta(delta: float, ratio: float) -> float:
    x = sqrt(ratio) * sqrt(1 - delta) - sqrt(delta)
    return sqrt((1 - delta) / (1 + delta)) * x / (2 + x)


def _ssomp_conditions(delta: float, rho: float) -> tuple[float, float]:
    cond2 = (1 - sqrt(delta)) * sqrt(1 - delta) / (sqrt(1 + delta) * (2 - sqrt(delta)))
    cond3 = (rho / sqrt(1 + delta) - 2 * delta / sqrt(1 - delta)) / 2
    return cond2, cond3


def _rho_for(s: int, r: int, rho: float | None) -> float:
    if rho is not None:
        return rho
    if r <= s / 2:
        return 0.0
    return rho_lower_bound(s, r)


def _require_s_r(regime: Regime, s: int | None, r: int | None):
    if s is None or r is None or not (1 <= r <= s):
        raise InvalidInputError(f"Regime {regime.value} requer 1 <= r <= s", {'s': s, 'r': r})


def _check_regime_params(regime: Regime, params: dict[str, Any]):
    """Rejeita parametros desconhecidos ou nao usados pelo regime"""
    allowed = REGIME_PARAMS[regime]
    unknown = sorted(k for k in params if k not in CURVE_PARAMS)
    unused = sorted(k for k, v in params.items() if k in CURVE_PARAMS and k not in allowed and v is not None)
    if unknown or unused:
        raise InvalidInputError(
            f"Parametros invalidos para o regime {regime.value}: {unknown + unused}",
            {'unknown': unknown, 'unused': unused, 'allowed': sorted(allowed)}
        )


def eta_bound(
    regime: Regime | str,
    delta: float,
    s: int | None = None,
    r: int | None = None,
    rho: float | None = None,
    **extra: Any
) -> float:
    """
    Maior eta certificado para um delta (com A normalizada)

    Args:
        regime: Regime de garantia
        delta: RIC weak-1 em [0, 1)
        s: Esparsidade (regimes sa_music_ssomp e sa_music_ssomsp)
        r: Dimensao do subespaco (idem)
        rho: rho(s, r) explicito, so em sa_music_ssomp; padrao por rho_lower_bound
        **extra: n, N, epsilon (apenas regime mbp)

    Returns:
        eta maximo, truncado em 0 quando inviavel; para mbp retorna 0
        (apenas o caso sem ruido e certificado; ver noiseless_ok)

    Raises:
        InvalidInputError: Parametro desconhecido ou nao usado pelo regime
    """
    regime = Regime(regime)
    _check_regime_params(regime, dict(extra, s=s, r=r, rho=rho))
    _unit_interval('delta', delta, closed_low=True)

    if regime is Regime.MUSIC_FULL_RANK:
        value = _music_eta(delta)
    elif regime is Regime.SA_MUSIC_ORACLE:
        value = sqrt((1 - delta) / (1 + delta)) * (1 - sqrt(delta)) / (3 - sqrt(delta))
    elif regime is Regime.SA_MUSIC_SSOMP:
        _require_s_r(regime, s, r)
        if r == s:
            value = _music_eta(delta)
        else:
            value = min(_ssomp_conditions(delta, _rho_for(s, r, rho)))
    elif regime is Regime.SA_MUSIC_SSOMSP:
        _require_s_r(regime, s, r)
        value = _ssomsp_eta(delta, r / s)
    elif regime is Regime.SSOMSP_ORACLE:
        value = _ssomsp_eta(delta, 1.0)
    else:
        value = 0.0
    return max(0.0, float(value))


def mbp_delta_threshold(n: int, N: int, epsilon: float) -> float:
    """
    Maior delta aceito pela condicao weak-1 de M-BP

    Com x = delta / (1 - delta), exige x^{-2} + 2 ln x >= 2 ln(n/eps)/N + 1;
    o lado esquerdo decresce em x < 1 e a raiz e obtida por bisseccao.

    Args:
        n: Numero de colunas
        N: Numero de snapshots
        epsilon: Probabilidade de falha

    Returns:
        delta maximo
    """
    _unit_interval('epsilon', epsilon)
    if n < 1 or N < 1:
        raise InvalidInputError("n e N devem ser positivos", {'n': n, 'N': N})
    rhs = 2 * log(n / epsilon) / N + 1

    def f(x: float) -> float:
        return x ** -2 + 2 * log(x) - rhs

    x_star = bisect(f, 1e-12, 1.0, xtol=BISECT_XTOL)
    return float(x_star / (1 + x_star))


def noiseless_delta_threshold(
    regime: Regime | str,
    s: int | None = None,
    r: int | None = None,
    n: int | None = None,
    N: int | None = None,
    epsilon: float | None = None,
    rho: float | None = None
) -> float:
    """
    Supremo de delta para o qual eta = 0 e certificado

    Args:
        regime: Regime de garantia
        s, r: Parametros dos regimes SA-MUSIC
        n, N, epsilon: Parametros do regime mbp
        rho: rho(s, r) explicito

    Returns:
        Limiar em (0, 1]
    """
    regime = Regime(regime)
    if regime in (Regime.MUSIC_FULL_RANK, Regime.SA_MUSIC_ORACLE):
        return 1.0
    if regime is Regime.SSOMSP_ORACLE:
        return 0.5
    if regime is Regime.SA_MUSIC_SSOMSP:
        _require_s_r(regime, s, r)
        return r / (r + s)
    if regime is Regime.SA_MUSIC_SSOMP:
        _require_s_r(regime, s, r)
        if r == s:
            return 1.0
        rho_value = _rho_for(s, r, rho)
        if rho_value <= 0:
            return 0.0

        def g(delta: float) -> float:
            return _ssomp_conditions(delta, rho_value)[1]

        return float(bisect(g, 0.0, 1.0 - 1e-15, xtol=BISECT_XTOL))
    if n is None or N is None or epsilon is None:
        raise InvalidInputError("Regime mbp requer n, N e epsilon")
    return mbp_delta_threshold(n, N, epsilon)


@dataclass
class GuaranteeCurve:
    """Amostras (delta, eta_max, noiseless_ok) de um regime"""

    regime: Regime
    params: dict[str, Any] = field(default_factory=dict)
    samples: list[tuple[float, float, bool]] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        """Tabela com uma linha por delta"""
        frame = pd.DataFrame(self.samples, columns=['delta', 'eta_max', 'noiseless_ok'])
        frame.insert(0, 'regime', self.regime.value)
        for key, value in sorted(self.params.items()):
            frame[key] = value
        return frame

    def is_monotone(self) -> bool:
        etas = [eta for _, eta, _ in sorted(self.samples)]
        return all(b <= a + 1e-15 for a, b in zip(etas, etas[1:]))


def guarantee_curve(regime: Regime | str, deltas: Iterable[float], **params: Any) -> GuaranteeCurve:
    """
    Avalia eta_bound e o limiar sem ruido para cada delta

    Args:
        regime: Regime de garantia
        deltas: Valores de delta em [0, 1)
        **params: s, r, rho, n, N, epsilon conforme o regime

    Returns:
        GuaranteeCurve ordenada por delta

    Raises:
        InvalidInputError: Parametro fora de s, r, rho, n, N, epsilon
    """
    regime = Regime(regime)
    unknown = sorted(set(params) - CURVE_PARAMS)
    if unknown:
        raise InvalidInputError(f"Parametros desconhecidos: {unknown}", {'unknown': unknown})
    if regime is Regime.SA_MUSIC_SSOMP:
        _require_s_r(regime, params.get('s'), params.get('r'))
        if params.get('rho') is None and params['r'] != params['s']:
            params = dict(params, rho=_rho_for(params['s'], params['r'], None))
    threshold = noiseless_delta_threshold(
        regime,
        **{k: params.get(k) for k in ('s', 'r', 'n', 'N', 'epsilon', 'rho')}
    )
    curve = GuaranteeCurve(regime=regime, params={k: v for k, v in params.items() if v is not None})
    regime_params = {k: v for k, v in curve.params.items() if k in REGIME_PARAMS[regime]}
    for delta in sorted(float(d) for d in deltas):
        eta = eta_bound(regime, delta, **regime_params)
        if regime is Regime.SA_MUSIC_SSOMSP or regime is Regime.SSOMSP_ORACLE:
            ok = delta < threshold
        else:
            ok = delta <= threshold
        curve.samples.append((delta, eta, bool(ok)))
    return curve


def music_eta_max(alpha: float, column_norm: float = 1.0) -> float:
    """Maior eta < 1/2 com alpha >= 2 sqrt(eta (1 - eta)) ||A^H||_{2,inf}"""
    ratio = alpha / column_norm
    if not 0 <= ratio <= 1:
        raise InvalidInputError("alpha / ||A^H||_{2,inf} deve estar em [0, 1]", {'ratio': ratio})
    return (1 - sqrt(1 - ratio ** 2)) / 2


def oracle_eta_max(alpha: float, beta: float, column_norm: float = 1.0) -> float:
    """Maior eta com 1 - sqrt(1 - alpha^2/||A^H||^2) >= 2 eta beta / (alpha - eta beta)"""
    ratio = alpha / column_norm
    if not 0 <= ratio <= 1 or beta <= 0:
        raise InvalidInputError("Parametros alpha/beta invalidos", {'alpha': alpha, 'beta': beta})
    L = 1 - sqrt(1 - ratio ** 2)
    return L * alpha / (beta * (2 + L))


def _gaussian_factor(delta: float) -> float:
    return 1.0 / (sqrt(1 + delta) - 1) ** 2


def min_measurements(
    ensemble: MeasurementEnsemble | str,
    s: int,
    n: int,
    epsilon: float,
    delta: float | None = None,
    gamma: float | None = None,
    K: float = 1.0,
    form: str = 'cond2'
) -> int:
    """
    Menor m inteiro que satisfaz a condicao suficiente do ensemble

    Args:
        ensemble: gaussian, gaussian_asymmetric, gaussian_uniform, fourier, untf, untf_uniform
        s: Esparsidade
        n: Numero de colunas
        epsilon: Probabilidade de falha em (0, 1)
        delta: RIC alvo em (0, 1) (todos exceto gaussian_asymmetric)
        gamma: Desvio assimetrico em (0, 1) (gaussian_asymmetric)
        K: Constante de coerencia mu <= K / sqrt(m) (untf)
        form: 'cond1' (forma com raiz) ou 'cond2' (relaxada por concavidade), ensembles gaussianos

    Returns:
        m minimo
    """
    ensemble = MeasurementEnsemble(ensemble)
    _unit_interval('epsilon', epsilon)
    if not 1 <= s < n:
        raise InvalidInputError(f"Requer 1 <= s < n, recebido s={s}, n={n}", {'s': s, 'n': n})
    if form not in ('cond1', 'cond2'):
        raise InvalidInputError(f"Forma desconhecida: {form}", {'form': form})
    if ensemble is MeasurementEnsemble.GAUSSIAN_ASYMMETRIC:
        if gamma is None:
            raise InvalidInputError("gaussian_asymmetric requer gamma")
        _unit_interval('gamma', gamma)
    else:
        if delta is None:
            raise InvalidInputError(f"{ensemble.value} requer delta")
        _unit_interval('delta', delta)
    if K <= 0:
        raise InvalidInputError(f"K={K} deve ser positivo", {'K': K})

    if ensemble is MeasurementEnsemble.GAUSSIAN:
        if form == 'cond1':
            root = (sqrt(s + 1) + sqrt(2 * log(2 * (n - s) / epsilon))) / (sqrt(1 + delta) - 1)
            value = root ** 2
        else:
            value = 2 * _gaussian_factor(delta) * (s + 2 * log(2 * (n - s) / epsilon) + 1)
    elif ensemble is MeasurementEnsemble.GAUSSIAN_ASYMMETRIC:
        if form == 'cond1':
            value = ((sqrt(s + 1) + sqrt(2 * log((n - s) / epsilon))) / gamma) ** 2
        else:
            value = (2 / gamma ** 2) * (s + 2 * log(2 * (n - s) / epsilon) + 1)
    elif ensemble is MeasurementEnsemble.GAUSSIAN_UNIFORM:
        value = 2 * _gaussian_factor(delta) * ((3 + log(n / s)) * s + 2 * log(2 / epsilon) + 1)
    elif ensemble is MeasurementEnsemble.FOURIER:
        value = (2 * (3 + delta) / (3 * delta ** 2)) * (log(2 * (n - s) / epsilon) + log(s + 1)) * (s + 1)
    elif ensemble is MeasurementEnsemble.UNTF:
        value = (4 * sqrt(e) / delta ** 2) * (s + 288 * K ** 2 * log((n - s) / epsilon) + 1)
    else:
        value = (4 * sqrt(e) / delta ** 2) * (
            (1 + 576 * K ** 2 * log(e * n / s)) * s + 288 * K ** 2 * log(1 / epsilon) + 1
        )
    return _robust_ceil(value)


def oversampling_constants(
    ensemble: MeasurementEnsemble | str,
    delta: float,
    s: int,
    n: int,
    epsilon: float,
    K: float = 1.0
) -> tuple[float, float]:
    """
    Constantes (C1, C2) de m >= C1 (s + C2)

    Args:
        ensemble: gaussian, gaussian_asymmetric (delta faz o papel de gamma), fourier ou untf
        delta: RIC alvo
        s, n, epsilon: Parametros da condicao
        K: Constante de coerencia (untf)

    Returns:
        (C1, C2)
    """
    ensemble = MeasurementEnsemble(ensemble)
    _unit_interval('delta', delta)
    _unit_interval('epsilon', epsilon)
    log_term = log(2 * (n - s) / epsilon)
    if ensemble is MeasurementEnsemble.GAUSSIAN:
        return 2 * _gaussian_factor(delta), 2 * log_term + 1
    if ensemble is MeasurementEnsemble.GAUSSIAN_ASYMMETRIC:
        return 2 / delta ** 2, 2 * log_term + 1
    if ensemble is MeasurementEnsemble.FOURIER:
        return (2 * (3 + delta) / (3 * delta ** 2)) * (log_term + log(s + 1)), 1.0
    if ensemble is MeasurementEnsemble.UNTF:
        return 4 * sqrt(e) / delta ** 2, 288 * K ** 2 * log((n - s) / epsilon) + 1
    raise InvalidInputError(f"Sem forma C1 (s + C2) para {ensemble.value}", {'ensemble': ensemble.value})


def asymptotic_oversampling(ensemble: MeasurementEnsemble | str, delta: float, form: str = 'cond1') -> float:
    """
    Limite de m/s quando o termo logaritmico e desprezivel

    Args:
        ensemble: gaussian, gaussian_asymmetric ou untf
        delta: RIC alvo (gamma no caso assimetrico)
        form: 'cond1' ou 'cond2'

    Returns:
        Fator de sobreamostragem
    """
    ensemble = MeasurementEnsemble(ensemble)
    _unit_interval('delta', delta)
    factor = 1.0 if form == 'cond1' else 2.0
    if ensemble is MeasurementEnsemble.GAUSSIAN:
        return factor * _gaussian_factor(delta)
    if ensemble is MeasurementEnsemble.GAUSSIAN_ASYMMETRIC:
        return factor / delta ** 2
    if ensemble is MeasurementEnsemble.UNTF:
        return 4 * sqrt(e) / delta ** 2
    raise InvalidInputError(f"Sobreamostragem assintotica indefinida para {ensemble.value}")


def snapshot_constant(eta: float, nu: float, theta: float, tau: float) -> float:
    """C = (1 + theta) tau min{(1 + nu) eta / 3, nu / (2 + tau)}"""
    return (1 + theta) * tau * min((1 + nu) * eta / 3, nu / (2 + tau))


def min_snapshots(
    m: int,
    s: int,
    epsilon: float,
    eta: float,
    nu: float,
    theta: float,
    tau: float,
    noise_ratio: float
) -> int:
    """
    Menor N que satisfaz as tres condicoes de snapshots

    N > 2(m + s); N >= (36/theta^2)[s + ln(8/eps)];
    N >= (144/C^2)(rho + 2 sqrt(rho))[m + s + ln(8/eps)] com rho = sigma_w^2 / lambda_1(Gamma).

    Args:
        m, s: Dimensoes
        epsilon, eta, nu, theta, tau: Parametros em (0, 1)
        noise_ratio: sigma_w^2 / lambda_1(Gamma) >= 0

    Returns:
        N minimo
    """
    for name, value in (('epsilon', epsilon), ('eta', eta), ('nu', nu), ('theta', theta), ('tau', tau)):
        _unit_interval(name, value)
    if noise_ratio < 0 or not np.isfinite(noise_ratio):
        raise InvalidInputError(f"noise_ratio={noise_ratio} deve ser >= 0", {'noise_ratio': noise_ratio})
    if m < 1 or s < 1:
        raise InvalidInputError("m e s devem ser positivos", {'m': m, 's': s})

    cond1 = 2 * (m + s) + 1
    cond2 = _robust_ceil((36 / theta ** 2) * (s + log(8 / epsilon)))
    C = snapshot_constant(eta, nu, theta, tau)
    cond3 = _robust_ceil((144 / C ** 2) * (noise_ratio + 2 * sqrt(noise_ratio)) * (m + s + log(8 / epsilon)))
    return int(max(cond1, cond2, cond3))
