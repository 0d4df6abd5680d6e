import { describe, expect, it } from 'vitest'
import { parseBinaryStl } from '../src/stl'
import { triangleStlBytes } from './fakes'

function cubeLikeStl(triangles: number[][][]): ArrayBuffer {
  const buffer = new ArrayBuffer(84 + 50 * triangles.length)
  const view = new DataView(buffer)
  view.setUint32(80, triangles.length, true)
  triangles.forEach((tri, i) => {
    const base = 84 + 50 * i + 12
    tri.flat().forEach((value, c) => view.setFloat32(base + 4 * c, value, true))
  })
  return buffer
}

describe('parseBinaryStl', () => {
  it('reads triangle count and positions', () => {
    const mesh = parseBinaryStl(triangleStlBytes())
    expect(mesh.triangleCount).toBe(1)
    expect(Array.from(mesh.positions)).toEqual([0, 0, 0, 10, 0, 0, 0, 10, 0])
  })

  it('recomputes unit normals from winding', () => {
    const mesh = parseBinaryStl(
      cubeLikeStl([
        [
          [0, 0, 0],
          [1, 0, 0],
          [0, 1, 0],
        ],
      ]),
    )
    expect(Array.from(mesh.normals.slice(0, 3))).toEqual([0, 0, 1])
  })

  it('handles several triangles', () => {
    const tri = [
      [0, 0, 0],
      [1, 0, 0],
      [0, 1, 0],
    ]
    const mesh = parseBinaryStl(cubeLikeStl([tri, tri, tri]))
    expect(mesh.triangleCount).toBe(3)
    expect(mesh.positions.length).toBe(27)
  })

  it('rejects short buffers', () => {
    expect(() => parseBinaryStl(new ArrayBuffer(10))).toThrow(/84 bytes/)
  })

  it('rejects truncated facet data', () => {
    const buffer = new ArrayBuffer(90)
    new DataView(buffer).setUint32(80, 5, true)
    expect(() => parseBinaryStl(buffer)).toThrow(/truncated/)
  })
})
