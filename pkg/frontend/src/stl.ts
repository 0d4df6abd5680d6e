// Binary STL decoding for rendering. Normals are recomputed from the
// winding because scan exports carry unreliable ones.

export interface StlMesh {
  triangleCount: number
  positions: Float32Array // 9 floats per triangle
  normals: Float32Array // 9 floats per triangle (flat shading)
}

export function parseBinaryStl(buffer: ArrayBuffer): StlMesh {
  if (buffer.byteLength < 84) {
    throw new Error(`binary STL needs at least 84 bytes, got ${buffer.byteLength}`)
  }
  const view = new DataView(buffer)
  const count = view.getUint32(80, true)
  if (buffer.byteLength < 84 + 50 * count) {
    throw new Error(`binary STL truncated: ${count} facets declared`)
  }
  const positions = new Float32Array(count * 9)
  const normals = new Float32Array(count * 9)
  for (let i = 0; i < count; i++) {
    const base = 84 + 50 * i + 12 // skip the stored normal
    for (let c = 0; c < 9; c++) {
      positions[i * 9 + c] = view.getFloat32(base + 4 * c, true)
    }
    const p = i * 9
    const ux = positions[p + 3] - positions[p]
    const uy = positions[p + 4] - positions[p + 1]
    const uz = positions[p + 5] - positions[p + 2]
    const vx = positions[p + 6] - positions[p]
    const vy = positions[p + 7] - positions[p + 1]
    const vz = positions[p + 8] - positions[p + 2]
    let nx = uy * vz - uz * vy
    let ny = uz * vx - ux * vz
    let nz = ux * vy - uy * vx
    const len = Math.hypot(nx, ny, nz)
    if (len > 0) {
      nx /= len
      ny /= len
      nz /= len
    }
    for (let corner = 0; corner < 3; corner++) {
      normals[p + corner * 3] = nx
      normals[p + corner * 3 + 1] = ny
      normals[p + corner * 3 + 2] = nz
    }
  }
  return { triangleCount: count, positions, normals }
}
