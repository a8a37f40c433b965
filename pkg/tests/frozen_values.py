"""Reference values frozen from independent oracles.

FROZEN_SONINE entries come from bessel_j_sonine (200-bit quadrature of the
vertical-line contour representation); regenerate with
bessel_j_sonine(nu, u, prec_bits=200). FROZEN_LOGGAMMA entries come from
mpmath.loggamma at 50 significant digits. A subset of each is re-derived
live in the test suite.
"""

FROZEN_SONINE = [
    (0, 0.1, (0.99750156206604 + 0j)),
    (0, 1, (0.7651976865579666 + 0j)),
    (0, 10, (-0.24593576445134835 + 0j)),
    (0, 100, (0.019985850304223122 + 0j)),
    (0, 628.3, (0.02208274129362337 + 0j)),
    (0.5, 0.1, (0.25189294032600096 + 0j)),
    (0.5, 1, (0.6713967071418031 + 0j)),
    (0.5, 10, (-0.1372637357550505 + 0j)),
    (0.5, 100, (-0.04040213271625212 + 0j)),
    (0.5, 628.3, (-0.0005898260128999574 + 0j)),
    (2, 0.1, (0.001248958658799919 + 0j)),
    (2, 1, (0.11490348493190047 + 0j)),
    (2, 10, (0.2546303136851206 + 0j)),
    (2, 100, (-0.021528757344505364 + 0j)),
    (2, 628.3, (-0.022155662730561947 + 0j)),
    (3.5, 0.1, (2.4016486669206174e-06 + 0j)),
    (3.5, 1, (0.0071862120189627 + 0j)),
    (3.5, 10, (-0.0996532509649839 + 0j)),
    (3.5, 100, (0.07112340876250937 + 0j)),
    (3.5, 628.3, (0.03183041615112004 + 0j)),
    (3.5 + 14.1347j, 0.1, (-0.7397729740179013 - 0.9000529251341447j)),
    (3.5 + 14.1347j, 1, (1621.9454001473325 - 3287.3060913432546j)),
    (3.5 + 14.1347j, 10, (111837.88298453542 + 7466431.369868348j)),
    (3.5 + 14.1347j, 100, (11097247.965192094 - 105892304.88506277j)),
    (3.5 + 14.1347j, 628.3, (63673133.99828541 - 10792740.039449632j)),
    (3.5 + 25.01j, 0.1, (-848132.5176176088 + 3116116.993036735j)),
    (3.5 + 25.01j, 1, (-9861403962.65933 + 2586294541.0281787j)),
    (3.5 + 25.01j, 10, (4225713764991.889 - 27062597133418.8j)),
    (3.5 + 25.01j, 100, (-1723665078118370 + 808135970705668.5j)),
    (3.5 + 25.01j, 628.3, (1394465008882024.2 - 773763445047571.9j)),
]

FROZEN_LOGGAMMA = [
    (0.5 + 14.134725141734695j, -21.28383579968766 + 23.305944848039555j),
    (3.5 + 14.134725141734695j, -13.316305749066238 + 27.702189859770993j),
    (2.0 - 7.0j, -7.147669177117874 - 8.823755570627004j),
    (25.0 + 100.0j, -43.09331057950687 + 396.02999813389056j),
    (-0.5 + 0.0j, 1.2655121234846454 - 3.141592653589793j),
]
