/* tslint:disable */
/* eslint-disable */

/**
 * Draws one scan of a target seen from `sensor` and returns the scan
 * (cartesian points) with its log-likelihood over a horizontal slice
 * through the target, as JSON.
 */
export function likelihood_slice(target: Float64Array, sensor: Float64Array, clutter_rate: number, seed: bigint, extent_m: number, n: number): string;

/**
 * Received power (dB) of one jammer at `transmitter` aimed at `aim`, over a
 * horizontal slice through the transmitter. Cells the beam misses are NaN.
 */
export function power_field(transmitter: Float64Array, aim: Float64Array, power_db: number, opening_angle_deg: number, extent_m: number, n: number): Float64Array;

/**
 * Runs one trial and returns truth, fused estimate and agent tracks as JSON.
 */
export function run_scenario(mode: string, agents: number, steps: number, particles: number, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly likelihood_slice: (a: number, b: number, c: number, d: number, e: number, f: bigint, g: number, h: number) => [number, number, number, number];
    readonly power_field: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly run_scenario: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
