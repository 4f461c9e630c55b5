@types.vectorize
def cubic_32_16(x):
    """Piecewise polynomial approximation, format <32,16>, order 3,
    5 pieces including the out-of-domain defaults.

    Args:
        x (sfix): the input secret value.
    Returns:
        sfix: secret f(x).
    """

    # In user-level mpc file:
    # probability truncation acceleration.
    program.use_trunc_pr = True
    program.use_split(3)

    # Config of piece-wise polynomial.
    breaks = [-32767.9999847412109375, -4.0, -1.0, 1.5, 4.0]
    coeffA = [[0.25, 0.0, 0.0, 0.0],
        [0.25, -0.5, 0.125, 0.0625],
        [1.0, 0.75, -0.25, 0.0],
        [-2.0, 1.5, 0.5, -0.125],
        [-2.0, 0.0, 0.0, 0.0]]
    scaler = [[1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, 1.0, 1.0]]

    m = len(coeffA)
    k = len(coeffA[0])
    degree = k - 1

    # Compute the target mask.
    comp = sfix.Array(m)
    for i in range(m):
        comp[i] = (x >= breaks[i])
    cipher_index = bb.get_last_one(comp)

    # Calculate [x, x^2, ..., x^degree].
    pre_muls = floatingpoint.PreOpL(lambda a, b, _: a * b, [x] * degree)

    # Compute c_i * x^i * s_i.
    poss_res = [0] * m
    for i in range(m):
        poss_res[i] = coeffA[i][0] * scaler[i][0]
        for j in range(degree):
            poss_res[i] += coeffA[i][j + 1] * pre_muls[j] * scaler[i][j + 1]

    # Get result with mask and all possible values.
    return sfix.dot_product(cipher_index, poss_res)
