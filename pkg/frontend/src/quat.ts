// Minimal quaternion helpers in the server's (w, x, y, z) convention.

export type Quat = [number, number, number, number]

export function qMultiply(a: Quat, b: Quat): Quat {
  const [aw, ax, ay, az] = a
  const [bw, bx, by, bz] = b
  return [
    aw * bw - ax * bx - ay * by - az * bz,
    aw * bx + ax * bw + ay * bz - az * by,
    aw * by - ax * bz + ay * bw + az * bx,
    aw * bz + ax * by - ay * bx + az * bw,
  ]
}

export function qNormalize(q: Quat): Quat {
  const n = Math.hypot(q[0], q[1], q[2], q[3])
  return [q[0] / n, q[1] / n, q[2] / n, q[3] / n]
}

/** Rotation of `rad` about the world Z axis. */
export function qAboutZ(rad: number): Quat {
  return [Math.cos(rad / 2), 0, 0, Math.sin(rad / 2)]
}

export function qAngleDeg(a: Quat, b: Quat): number {
  const dot = Math.abs(a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3])
  return (2 * Math.acos(Math.min(dot, 1))) * (180 / Math.PI)
}
