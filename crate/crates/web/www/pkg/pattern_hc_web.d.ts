/* tslint:disable */
/* eslint-disable */

/**
 * Estimated probability of the degree condition at the threshold shifted by `c`,
 * for `steps` values of `c` in `[c_min, c_max]`, next to the limiting value.
 */
export function event_a_curve(n: number, pattern: string, c_min: number, c_max: number, steps: number, trials: number, seed: bigint): string;

/**
 * Canonical form, class and degree condition of a pattern written with `>` and `<`.
 */
export function pattern_info(pattern: string): string;

/**
 * Samples `D(n, p)` and searches it exactly for a pattern Hamilton cycle (`n <= 12`).
 */
export function sample_and_solve(n: number, p: number, pattern: string, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly event_a_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number];
    readonly pattern_info: (a: number, b: number) => [number, number];
    readonly sample_and_solve: (a: number, b: number, c: number, d: number, e: bigint) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
