/**
 * CNNW weight stream and CNNT tensor file codecs.
 *
 * Byte layout (little-endian throughout, reals are IEEE-754 binary32):
 *   magic "CNNW" | u32 version=1 | u32 layerCount
 *   per layer: u8 type (1 conv, 2 maxpool, 3 flatten, 4 dense)
 *              u8 activation (0 none, 1 relu, 2 leakyRelu, 3 tanh,
 *                             4 sigmoid, 5 softmax)
 *              [f32 alpha, only when activation = 2]
 *              u8 frozen
 *              u32 dims: conv f,cIn,cOut,stride,pad | pool f,s | dense in,out
 *              f32 weights (conv kernel row,col,inCh,outCh; dense in,out)
 *              f32 bias
 *   u32 crc32 of all preceding bytes
 *
 * Tensor files: "CNNT" | u32 version=1 | u32 ndim | u32 dims[] | f32 data.
 */

export enum LayerType {
  Conv = 1,
  MaxPool = 2,
  Flatten = 3,
  Dense = 4,
}

export enum ActivationTag {
  None = 0,
  Relu = 1,
  LeakyRelu = 2,
  Tanh = 3,
  Sigmoid = 4,
  Softmax = 5,
}

export interface ConvWire {
  type: LayerType.Conv;
  activation: ActivationTag;
  alpha?: number;
  frozen: boolean;
  filterSize: number;
  inChannels: number;
  outChannels: number;
  stride: number;
  pad: number;
  kernels: Float32Array; // (f, f, inCh, outCh) row-major
  bias: Float32Array;
}

export interface MaxPoolWire {
  type: LayerType.MaxPool;
  frozen: boolean;
  filterSize: number;
  stride: number;
}

export interface FlattenWire {
  type: LayerType.Flatten;
  frozen: boolean;
}

export interface DenseWire {
  type: LayerType.Dense;
  activation: ActivationTag;
  alpha?: number;
  frozen: boolean;
  inFeatures: number;
  outFeatures: number;
  weights: Float32Array; // (in, out) row-major
  bias: Float32Array;
}

export type LayerWire = ConvWire | MaxPoolWire | FlattenWire | DenseWire;

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

export function crc32(data: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < data.length; i++) c = CRC_TABLE[(c ^ data[i]) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

class ByteWriter {
  private chunks: Uint8Array[] = [];

  u8(value: number): void {
    this.chunks.push(Uint8Array.of(value & 0xff));
  }

  u32(value: number): void {
    const buf = new Uint8Array(4);
    new DataView(buf.buffer).setUint32(0, value >>> 0, true);
    this.chunks.push(buf);
  }

  f32(value: number): void {
    const buf = new Uint8Array(4);
    new DataView(buf.buffer).setFloat32(0, value, true);
    this.chunks.push(buf);
  }

  f32Array(values: Float32Array): void {
    const buf = new Uint8Array(values.length * 4);
    const view = new DataView(buf.buffer);
    values.forEach((v, i) => view.setFloat32(i * 4, v, true));
    this.chunks.push(buf);
  }

  bytes(): Uint8Array {
    const total = this.chunks.reduce((n, c) => n + c.length, 0);
    const out = new Uint8Array(total);
    let pos = 0;
    for (const chunk of this.chunks) {
      out.set(chunk, pos);
      pos += chunk.length;
    }
    return out;
  }
}

class ByteReader {
  pos = 0;
  private view: DataView;

  constructor(private data: Uint8Array) {
    this.view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  }

  private need(n: number): void {
    if (this.pos + n > this.data.length) {
      throw new Error(`truncated stream at byte ${this.pos}, needed ${this.pos + n}`);
    }
  }

  u8(): number {
    this.need(1);
    return this.data[this.pos++];
  }

  u32(): number {
    this.need(4);
    const v = this.view.getUint32(this.pos, true);
    this.pos += 4;
    return v;
  }

  f32(): number {
    this.need(4);
    const v = this.view.getFloat32(this.pos, true);
    this.pos += 4;
    return v;
  }

  f32Array(count: number): Float32Array {
    this.need(count * 4);
    const out = new Float32Array(count);
    for (let i = 0; i < count; i++) out[i] = this.view.getFloat32(this.pos + i * 4, true);
    this.pos += count * 4;
    return out;
  }

  ascii(n: number): string {
    this.need(n);
    const s = String.fromCharCode(...this.data.subarray(this.pos, this.pos + n));
    this.pos += n;
    return s;
  }

  remaining(): number {
    return this.data.length - this.pos;
  }
}

const MAGIC = "CNNW";
const TENSOR_MAGIC = "CNNT";
const VERSION = 1;

export function encodeCnnw(layers: LayerWire[]): Uint8Array {
  const w = new ByteWriter();
  for (const ch of MAGIC) w.u8(ch.charCodeAt(0));
  w.u32(VERSION);
  w.u32(layers.length);
  for (const layer of layers) {
    w.u8(layer.type);
    const activation = "activation" in layer ? layer.activation : ActivationTag.None;
    w.u8(activation);
    if (activation === ActivationTag.LeakyRelu) {
      w.f32("alpha" in layer && layer.alpha !== undefined ? layer.alpha : 0.01);
    }
    w.u8(layer.frozen ? 1 : 0);
    switch (layer.type) {
      case LayerType.Conv: {
        w.u32(layer.filterSize);
        w.u32(layer.inChannels);
        w.u32(layer.outChannels);
        w.u32(layer.stride);
        w.u32(layer.pad);
        w.f32Array(layer.kernels);
        w.f32Array(layer.bias);
        break;
      }
      case LayerType.MaxPool: {
        w.u32(layer.filterSize);
        w.u32(layer.stride);
        break;
      }
      case LayerType.Flatten:
        break;
      case LayerType.Dense: {
        w.u32(layer.inFeatures);
        w.u32(layer.outFeatures);
        w.f32Array(layer.weights);
        w.f32Array(layer.bias);
        break;
      }
    }
  }
  const body = w.bytes();
  const trailer = new Uint8Array(4);
  new DataView(trailer.buffer).setUint32(0, crc32(body), true);
  const out = new Uint8Array(body.length + 4);
  out.set(body, 0);
  out.set(trailer, body.length);
  return out;
}

export function decodeCnnw(data: Uint8Array): LayerWire[] {
  const r = new ByteReader(data);
  if (r.ascii(4) !== MAGIC) throw new Error("bad magic");
  const version = r.u32();
  if (version !== VERSION) throw new Error(`unsupported version ${version}`);
  const count = r.u32();
  const layers: LayerWire[] = [];
  for (let i = 0; i < count; i++) {
    const type = r.u8() as LayerType;
    const activation = r.u8() as ActivationTag;
    const alpha = activation === ActivationTag.LeakyRelu ? r.f32() : undefined;
    const frozen = r.u8() === 1;
    if (type === LayerType.Conv) {
      const f = r.u32();
      const cIn = r.u32();
      const cOut = r.u32();
      const stride = r.u32();
      const pad = r.u32();
      layers.push({
        type,
        activation,
        alpha,
        frozen,
        filterSize: f,
        inChannels: cIn,
        outChannels: cOut,
        stride,
        pad,
        kernels: r.f32Array(f * f * cIn * cOut),
        bias: r.f32Array(cOut),
      });
    } else if (type === LayerType.MaxPool) {
      layers.push({ type, frozen, filterSize: r.u32(), stride: r.u32() });
    } else if (type === LayerType.Flatten) {
      layers.push({ type, frozen });
    } else if (type === LayerType.Dense) {
      const inF = r.u32();
      const outF = r.u32();
      layers.push({
        type,
        activation,
        alpha,
        frozen,
        inFeatures: inF,
        outFeatures: outF,
        weights: r.f32Array(inF * outF),
        bias: r.f32Array(outF),
      });
    } else {
      throw new Error(`unknown layer type tag ${type}`);
    }
  }
  const stored = r.u32();
  if (r.remaining() !== 0) throw new Error(`${r.remaining()} trailing bytes`);
  const actual = crc32(data.subarray(0, data.length - 4));
  if (actual !== stored) throw new Error(`crc mismatch ${actual} != ${stored}`);
  return layers;
}

export function encodeTensor(shape: number[], data: Float32Array): Uint8Array {
  const expected = shape.reduce((a, b) => a * b, 1);
  if (expected !== data.length) {
    throw new Error(`shape ${shape} holds ${expected} values, data has ${data.length}`);
  }
  const w = new ByteWriter();
  for (const ch of TENSOR_MAGIC) w.u8(ch.charCodeAt(0));
  w.u32(VERSION);
  w.u32(shape.length);
  for (const dim of shape) w.u32(dim);
  w.f32Array(data);
  return w.bytes();
}

export function decodeTensor(data: Uint8Array): { shape: number[]; data: Float32Array } {
  const r = new ByteReader(data);
  if (r.ascii(4) !== TENSOR_MAGIC) throw new Error("bad tensor magic");
  if (r.u32() !== VERSION) throw new Error("unsupported tensor version");
  const ndim = r.u32();
  const shape = Array.from({ length: ndim }, () => r.u32());
  const count = shape.reduce((a, b) => a * b, 1);
  const values = r.f32Array(count);
  if (r.remaining() !== 0) throw new Error("trailing bytes in tensor file");
  return { shape, data: values };
}

export function countParams(layers: LayerWire[]): { total: number; trainable: number } {
  let total = 0;
  let trainable = 0;
  for (const layer of layers) {
    let n = 0;
    if (layer.type === LayerType.Conv) n = layer.kernels.length + layer.bias.length;
    if (layer.type === LayerType.Dense) n = layer.weights.length + layer.bias.length;
    total += n;
    if (!layer.frozen) trainable += n;
  }
  return { total, trainable };
}
