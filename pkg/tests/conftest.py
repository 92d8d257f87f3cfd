from affine_fields import AffineField


def random_affine_field(rng, n, c_scale=2.0, b_scale=2.0) -> AffineField:
    return AffineField(
        rng.uniform(-c_scale, c_scale, size=(n, n)),
        rng.uniform(-b_scale, b_scale, size=n),
    )
