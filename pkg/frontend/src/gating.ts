/**
 * Client-side mirror of the negotiation machine, used only to enable or
 * disable action buttons. The service remains authoritative; an illegal
 * action that slips through still gets a 409 and a toast.
 *
 * Rules: terminal states (accepted, rejected, expired) admit no actions;
 * in proposed/countered the party that authored the pending offer must
 * wait, while the other may accept, reject, or counter.
 */

export type SlaStateName = 'proposed' | 'countered' | 'accepted' | 'rejected' | 'expired';
export type ActorName = 'user' | 'provider';
export type ActionName = 'accept' | 'reject' | 'counter';

export const ALL_STATES: readonly SlaStateName[] =
  ['proposed', 'countered', 'accepted', 'rejected', 'expired'];
export const TERMINAL_STATES: ReadonlySet<SlaStateName> =
  new Set(['accepted', 'rejected', 'expired']);
export const ALL_ACTIONS: readonly ActionName[] = ['accept', 'reject', 'counter'];

export function allowedActions(
  state: SlaStateName,
  actor: ActorName,
  offerAuthor: ActorName,
): ActionName[] {
  if (TERMINAL_STATES.has(state)) return [];
  if (actor === offerAuthor) return [];
  return [...ALL_ACTIONS];
}
