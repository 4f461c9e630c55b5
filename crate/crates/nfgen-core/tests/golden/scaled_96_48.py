@types.vectorize
def scaled_96_48(x):
    """Piecewise polynomial approximation, format <96,48>, order 2,
    3 pieces including the out-of-domain defaults.

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
    breaks = [-140737488355327.999999999999996447286321199499070644378662109375, -1.0, 1.0]
    coeffA = [[0.0, 0.0, 0.0],
        [0.099999999999997868371792719699442386627197265625, 1099511627776.0, 8796093022208.0],
        [0.0, 0.0, 0.0]]
    scaler = [[1.0, 1.0, 1.0],
        [1.0, 0.0000000000009094947017729282379150390625, 0.0000000000001136868377216160297393798828125],
        [1.0, 1.0, 1.0]]

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
